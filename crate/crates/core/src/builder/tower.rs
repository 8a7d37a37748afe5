use serde::Serialize;

use crate::error::{Error, Result};
use crate::perms::Permutation;
use crate::structure::{automorphisms, Flags, Structure};

/// One stage of the graph tower.
#[derive(Debug, Clone)]
pub struct TowerStage {
    pub k: usize,
    pub graph: Structure,
    /// `(F, v_F)` for every subset `F` of the previous stage.
    pub new_vertex_table: Vec<(Vec<usize>, usize)>,
    /// `(g, eta(g))` for every automorphism of the base graph pushed up to
    /// the previous stage.
    pub eta: Vec<(Permutation, Permutation)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TowerStageSummary {
    pub k: usize,
    pub size: usize,
    pub edges: usize,
    pub new_vertices: usize,
    pub eta_size: usize,
}

impl TowerStage {
    pub fn summary(&self) -> TowerStageSummary {
        TowerStageSummary {
            k: self.k,
            size: self.graph.n(),
            edges: self.graph.r().len() / 2,
            new_vertices: self.new_vertex_table.len(),
            eta_size: self.eta.len(),
        }
    }
}

fn check_graph(a: &Structure) -> Result<()> {
    if !a.s().is_empty() {
        return Err(Error::input("tower seeds are graphs without S"));
    }
    if a.r().iter().any(|&(u, v)| u == v) {
        return Err(Error::input("tower seeds are loop-free"));
    }
    if a.r().iter().any(|&(u, v)| !a.has_edge(v, u)) {
        return Err(Error::input("tower seeds are symmetric graphs"));
    }
    Ok(())
}

/// `M_0 = A`, and `M_j` adds a vertex `v_F` adjacent to exactly `F` for
/// every subset `F` of `M_{j-1}`. The new vertex for the subset with bit
/// mask `m` is `|M_{j-1}| + m`.
pub fn rado_tower(a: &Structure, k: usize, budget: u128) -> Result<Vec<TowerStage>> {
    check_graph(a)?;
    if k == 0 {
        return Err(Error::input("the tower needs at least one stage"));
    }
    let flags = Flags {
        allow_loops: false,
        undirected: true,
    };
    let base = Structure::with_flags(a.name(), a.n(), flags, a.r().iter().copied(), [])?;
    let mut pushed: Vec<Permutation> = automorphisms(&base);
    let mut stages = vec![TowerStage {
        k: 0,
        graph: base,
        new_vertex_table: Vec::new(),
        eta: Vec::new(),
    }];
    for j in 1..=k {
        let prev = &stages[j - 1].graph;
        let n = prev.n();
        let required = if n >= 127 { u128::MAX } else { 1u128 << n };
        if required > budget {
            return Err(Error::capacity(format!("tower stage {j} new vertices"), required, budget));
        }
        let subsets = 1usize << n;
        let mut table = Vec::with_capacity(subsets);
        let mut edges = Vec::new();
        for mask in 0..subsets {
            let f: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
            let v = n + mask;
            edges.extend(f.iter().map(|&x| (x, v)));
            table.push((f, v));
        }
        let graph = prev.extended(format!("{}_{j}", a.name()), subsets, edges, [])?;
        let mut eta = Vec::with_capacity(pushed.len());
        for g in &pushed {
            let mut images = g.images().to_vec();
            for mask in 0..subsets {
                let img_mask: usize = (0..n).filter(|&x| mask >> x & 1 == 1).map(|x| 1 << g.apply(x)).sum();
                images.push(n + img_mask);
            }
            let h = Permutation::new(images)?;
            if !graph.is_automorphism(&h) {
                return Err(Error::integrity(format!("extension of {g} is not an automorphism")));
            }
            eta.push((g.clone(), h));
        }
        check_eta(&eta, n)?;
        pushed = eta.iter().map(|(_, h)| h.clone()).collect();
        stages.push(TowerStage {
            k: j,
            graph,
            new_vertex_table: table,
            eta,
        });
    }
    Ok(stages)
}

/// Extension, injectivity and multiplicativity of a stage's `eta`.
fn check_eta(eta: &[(Permutation, Permutation)], n: usize) -> Result<()> {
    let lookup = |g: &Permutation| eta.iter().find(|(x, _)| x == g).map(|(_, h)| h);
    for (g, h) in eta {
        if h.images()[..n] != *g.images() {
            return Err(Error::integrity(format!("eta({g}) does not extend {g}")));
        }
    }
    for (i, (_, a)) in eta.iter().enumerate() {
        if eta[i + 1..].iter().any(|(_, b)| a == b) {
            return Err(Error::integrity("eta is not injective"));
        }
    }
    for (g1, h1) in eta {
        for (g2, h2) in eta {
            let prod = lookup(&g1.compose(g2))
                .ok_or_else(|| Error::integrity("pushed automorphisms are not closed"))?;
            if *prod != h1.compose(h2) {
                return Err(Error::integrity("eta is not a homomorphism"));
            }
        }
    }
    Ok(())
}

/// For every pair of disjoint `U, V` inside the first `prev_n` vertices,
/// some vertex of `graph` is adjacent to all of `U` and none of `V`.
/// Returns the first pair without a witness.
pub fn check_tower_witnesses(graph: &Structure, prev_n: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut assign = vec![0u8; prev_n];
    for code in 0..3usize.pow(prev_n as u32) {
        let mut c = code;
        for a in assign.iter_mut() {
            *a = (c % 3) as u8;
            c /= 3;
        }
        let u: Vec<usize> = (0..prev_n).filter(|&x| assign[x] == 1).collect();
        let v: Vec<usize> = (0..prev_n).filter(|&x| assign[x] == 2).collect();
        let found = (0..graph.n()).any(|w| {
            !u.contains(&w)
                && !v.contains(&w)
                && u.iter().all(|&x| graph.has_edge(w, x))
                && v.iter().all(|&x| !graph.has_edge(w, x))
        });
        if !found {
            return Some((u, v));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Structure {
        Structure::with_flags("P3", 3, Flags { allow_loops: false, undirected: true }, [(0, 1), (1, 2)], []).unwrap()
    }

    #[test]
    fn path_tower() {
        let t = rado_tower(&path3(), 1, 1 << 20).unwrap();
        assert_eq!(t[1].graph.n(), 11);
        assert_eq!(t[1].eta.len(), 2);
        assert!(check_tower_witnesses(&t[1].graph, 3).is_none());
    }

    #[test]
    fn single_vertex_two_stages() {
        let t = rado_tower(&Structure::empty("pt", 1), 2, 1 << 20).unwrap();
        assert_eq!(t[1].graph.n(), 3);
        assert_eq!(t[2].graph.n(), 11);
    }

    #[test]
    fn budget_enforced() {
        let r = rado_tower(&path3(), 2, 100);
        match r {
            Err(Error::Capacity { required, .. }) => assert_eq!(required, 1 << 11),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn directed_seed_rejected() {
        let d = Structure::new("d", 2, [(0, 1)], []).unwrap();
        assert!(rado_tower(&d, 1, 100).is_err());
    }

    #[test]
    fn witness_check_fails_on_base() {
        assert!(check_tower_witnesses(&path3(), 3).is_some());
    }
}
