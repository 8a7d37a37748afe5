use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perms::{combinations, PermGroup, Permutation};
use crate::structure::{sorted4, Structure};

/// An injective map from the domain of a source structure into a target
/// that preserves and reflects every atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn new(source: &Structure, target: &Structure, map: Vec<usize>) -> Result<Self> {
        let e = Embedding { map };
        if !e.is_valid(source, target) {
            return Err(Error::input(format!(
                "{:?} is not an embedding of {} into {}",
                e.map,
                source.name(),
                target.name()
            )));
        }
        Ok(e)
    }

    pub fn identity(n: usize) -> Self {
        Embedding {
            map: (0..n).collect(),
        }
    }

    /// Direct atom-by-atom check.
    pub fn is_valid(&self, source: &Structure, target: &Structure) -> bool {
        let f = &self.map;
        if f.len() != source.n() || f.iter().any(|&y| y >= target.n()) {
            return false;
        }
        let distinct: HashSet<usize> = f.iter().copied().collect();
        if distinct.len() != f.len() {
            return false;
        }
        for u in 0..source.n() {
            for v in 0..source.n() {
                if source.has_edge(u, v) != target.has_edge(f[u], f[v]) {
                    return false;
                }
            }
        }
        for set in combinations(source.n(), 4) {
            let set = [set[0], set[1], set[2], set[3]];
            let src = source.s_on(&set);
            let img = sorted4(set.map(|x| f[x]));
            if src.len() != target.s_on(&img).len() {
                return false;
            }
            if src.iter().any(|t| !target.s().contains(&t.map(|x| f[x]))) {
                return false;
            }
        }
        true
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }
}

/// Backtracking matcher from `src` into `tgt`.
struct Matcher<'a> {
    src: &'a Structure,
    tgt: &'a Structure,
    order: Vec<usize>,
    bijective: bool,
    check_s: bool,
    limit: usize,
    map: Vec<usize>,
    used: Vec<bool>,
    out: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

/// Loop flag, out-degree, in-degree, number of `S` tuples through the vertex.
type Sig = (bool, usize, usize, usize);
type Sigs = (Vec<Sig>, Vec<Sig>);

impl<'a> Matcher<'a> {
    fn new(src: &'a Structure, tgt: &'a Structure, order: Vec<usize>, bijective: bool) -> Self {
        Matcher {
            src,
            tgt,
            order,
            bijective,
            check_s: !src.s().is_empty() || !tgt.s().is_empty(),
            limit: usize::MAX,
            map: vec![UNSET; src.n()],
            used: vec![false; tgt.n()],
            out: Vec::new(),
        }
    }

    fn signature(m: &Structure, v: usize) -> Sig {
        let s_count = m.s().iter().filter(|t| t.contains(&v)).count();
        (m.has_loop(v), m.out_degree(v), m.in_degree(v), s_count)
    }

    fn consistent(&self, x: usize, y: usize, sigs: Option<&Sigs>) -> bool {
        if self.src.has_loop(x) != self.tgt.has_loop(y) {
            return false;
        }
        if let Some((ss, ts)) = sigs {
            if ss[x] != ts[y] {
                return false;
            }
        }
        let assigned: Vec<usize> = (0..self.src.n())
            .filter(|&u| u != x && self.map[u] != UNSET)
            .collect();
        for &u in &assigned {
            let w = self.map[u];
            if self.src.has_edge(x, u) != self.tgt.has_edge(y, w)
                || self.src.has_edge(u, x) != self.tgt.has_edge(w, y)
            {
                return false;
            }
        }
        if self.check_s && assigned.len() >= 3 {
            for tri in combinations(assigned.len(), 3) {
                let (a, b, c) = (assigned[tri[0]], assigned[tri[1]], assigned[tri[2]]);
                let set = sorted4([x, a, b, c]);
                let img = sorted4([y, self.map[a], self.map[b], self.map[c]]);
                let src = self.src.s_on(&set);
                if src.len() != self.tgt.s_on(&img).len() {
                    return false;
                }
                let f = |z: usize| if z == x { y } else { self.map[z] };
                if src.iter().any(|t| !self.tgt.s().contains(&t.map(f))) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, fixed: &[(usize, usize)]) {
        for &(x, y) in fixed {
            if self.map[x] != UNSET || self.used[y] || !self.consistent(x, y, None) {
                return;
            }
            self.map[x] = y;
            self.used[y] = true;
        }
        let sigs = self.bijective.then(|| {
            (
                (0..self.src.n()).map(|v| Self::signature(self.src, v)).collect::<Vec<_>>(),
                (0..self.tgt.n()).map(|v| Self::signature(self.tgt, v)).collect::<Vec<_>>(),
            )
        });
        let order: Vec<usize> = self
            .order
            .iter()
            .copied()
            .filter(|&x| self.map[x] == UNSET)
            .collect();
        self.extend(&order, 0, sigs.as_ref());
    }

    fn extend(
        &mut self,
        order: &[usize],
        depth: usize,
        sigs: Option<&Sigs>,
    ) {
        if self.out.len() >= self.limit {
            return;
        }
        if depth == order.len() {
            self.out.push(self.map.clone());
            return;
        }
        let x = order[depth];
        for y in 0..self.tgt.n() {
            if self.used[y] || !self.consistent(x, y, sigs) {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            self.extend(order, depth + 1, sigs);
            self.map[x] = UNSET;
            self.used[y] = false;
            if self.out.len() >= self.limit {
                return;
            }
        }
    }
}

/// Every embedding of `a` into `m`, in lexicographic order of image lists.
pub fn find_embeddings(a: &Structure, m: &Structure) -> Vec<Embedding> {
    find_embeddings_limited(a, m, usize::MAX)
}

pub fn find_embeddings_limited(a: &Structure, m: &Structure, limit: usize) -> Vec<Embedding> {
    if a.n() > m.n() {
        return Vec::new();
    }
    let mut matcher = Matcher::new(a, m, (0..a.n()).collect(), false);
    matcher.limit = limit;
    matcher.run(&[]);
    matcher
        .out
        .into_iter()
        .map(|map| Embedding { map })
        .collect()
}

pub fn are_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.n() == b.n()
        && a.r().len() == b.r().len()
        && a.s().len() == b.s().len()
        && !find_embeddings_limited(a, b, 1).is_empty()
}

fn search_order(m: &Structure) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(m.degree(v)), v));
    order
}

/// Automorphisms of `m` extending the partial map `fixed`, sorted by image
/// list.
pub fn automorphisms_extending(m: &Structure, fixed: &[(usize, usize)]) -> Vec<Permutation> {
    if fixed.iter().any(|&(x, y)| x >= m.n() || y >= m.n()) {
        return Vec::new();
    }
    let mut matcher = Matcher::new(m, m, search_order(m), true);
    matcher.run(fixed);
    let mut out: Vec<Permutation> = matcher
        .out
        .into_iter()
        .map(|p| Permutation::new(p).expect("bijective search yields permutations"))
        .collect();
    out.sort();
    out
}

pub fn automorphisms(m: &Structure) -> Vec<Permutation> {
    automorphisms_extending(m, &[])
}

/// The full automorphism group, found by backtracking over partial vertex
/// maps with degree and relation pruning.
pub fn automorphism_group(m: &Structure) -> PermGroup {
    PermGroup::from_elements_reduced(m.n(), automorphisms(m))
        .expect("automorphisms form a group")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ultrahomogeneity {
    pub holds: bool,
    /// A partial isomorphism `(x, y)` pairs that no automorphism extends.
    pub counterexample: Option<Vec<(usize, usize)>>,
    pub isomorphisms_checked: usize,
}

/// Exhaustive check that every isomorphism between induced substructures
/// extends to an automorphism. In a relational language the finitely
/// generated substructures are exactly the finite induced ones.
pub fn is_ultrahomogeneous(m: &Structure) -> Ultrahomogeneity {
    let auts = automorphisms(m);
    let mut checked = 0;
    for k in 1..=m.n() {
        for subset in combinations(m.n(), k) {
            let restrictions: HashSet<Vec<usize>> = auts
                .iter()
                .map(|p| subset.iter().map(|&x| p.apply(x)).collect())
                .collect();
            let (sub, verts) = m.induced_substructure(&subset).expect("in range");
            for e in find_embeddings(&sub, m) {
                checked += 1;
                if !restrictions.contains(&e.map) {
                    return Ultrahomogeneity {
                        holds: false,
                        counterexample: Some(verts.iter().copied().zip(e.map).collect()),
                        isomorphisms_checked: checked,
                    };
                }
            }
        }
    }
    Ultrahomogeneity {
        holds: true,
        counterexample: None,
        isomorphisms_checked: checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a4() -> Structure {
        Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn single_vertex_embeds_everywhere() {
        let one = Structure::empty("v", 1);
        assert_eq!(find_embeddings(&one, &a4()).len(), 4);
    }

    #[test]
    fn directed_edge_into_a4() {
        let e = Structure::new("e", 2, [(0, 1)], []).unwrap();
        let embs = find_embeddings(&e, &a4());
        assert_eq!(embs.len(), 4);
        assert_eq!(embs[0].map, vec![0, 1]);
    }

    #[test]
    fn a4_automorphisms() {
        let g = automorphism_group(&a4());
        let elems: Vec<Vec<usize>> = g.elements().iter().map(|p| p.images().to_vec()).collect();
        assert_eq!(elems, vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1]]);
    }

    #[test]
    fn transitive_tournament_is_rigid() {
        let t = Structure::new("tt", 3, [(0, 1), (0, 2), (1, 2)], []).unwrap();
        assert_eq!(automorphism_group(&t).order(), 1);
    }

    #[test]
    fn directed_path_not_ultrahomogeneous() {
        let p = Structure::new("p", 3, [(0, 1), (1, 2)], []).unwrap();
        let u = is_ultrahomogeneous(&p);
        assert!(!u.holds);
        assert_eq!(u.counterexample, Some(vec![(0, 1)]));
    }

    #[test]
    fn edgeless_is_ultrahomogeneous() {
        for n in 0..5 {
            assert!(is_ultrahomogeneous(&Structure::empty("e", n)).holds);
        }
    }

    #[test]
    fn embedding_validation() {
        let e = Structure::new("e", 2, [(0, 1)], []).unwrap();
        assert!(Embedding::new(&e, &a4(), vec![1, 2]).is_ok());
        assert!(Embedding::new(&e, &a4(), vec![2, 1]).is_err());
        assert!(Embedding::new(&e, &a4(), vec![0, 2]).is_err());
    }
}
