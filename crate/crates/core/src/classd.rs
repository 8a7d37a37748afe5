//! Membership in the class of finite structures whose `R`-reduct is an
//! I3-free oriented graph and whose `S`-reduct is a semifinal structure,
//! together with its strong amalgamation, enumeration and sampling.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perms::combinations;
use crate::structure::{canonical_rep, partner, sorted4, Embedding, Structure};

/// Largest `n` enumerated exhaustively unless overridden.
pub const DEFAULT_ENUMERATION_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum I3Violation {
    /// Both `(u, v)` and `(v, u)` are edges.
    Symmetric(usize, usize),
    /// A 3-set with no edge.
    Anticlique([usize; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SemifinalViolation {
    /// A 4-set carrying `count` tuples instead of one partner pair.
    WrongCount { set: [usize; 4], count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ClassDViolation {
    Loop(usize),
    I3(I3Violation),
    Semifinal(SemifinalViolation),
}

/// First violation of I3-freeness. Loops are an input error.
pub fn i3_violation(m: &Structure) -> Result<Option<I3Violation>> {
    if let Some(&(v, _)) = m.r().iter().find(|(u, v)| u == v) {
        return Err(Error::input(format!("loop at vertex {v}")));
    }
    if let Some(&(u, v)) = m.r().iter().find(|&&(u, v)| u < v && m.has_edge(v, u)) {
        return Ok(Some(I3Violation::Symmetric(u, v)));
    }
    let n = m.n();
    let linked = |a: usize, b: usize| m.has_edge(a, b) || m.has_edge(b, a);
    for a in 0..n {
        for b in a + 1..n {
            if linked(a, b) {
                continue;
            }
            for c in b + 1..n {
                if !linked(a, c) && !linked(b, c) {
                    return Ok(Some(I3Violation::Anticlique([a, b, c])));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_i3_free(m: &Structure) -> Result<bool> {
    Ok(i3_violation(m)?.is_none())
}

/// First 4-set that does not carry exactly one semifinal.
pub fn semifinal_violation(m: &Structure) -> Option<SemifinalViolation> {
    // Tuples always have distinct entries and are partner-closed, so a
    // semifinal on a 4-set is exactly two tuples there.
    if let Some(set) = m.s_sets().find(|set| m.s_on(set).len() != 2) {
        return Some(SemifinalViolation::WrongCount {
            set: *set,
            count: m.s_on(set).len(),
        });
    }
    let covered = m.s().len() / 2;
    if covered == binomial(m.n(), 4) as usize {
        return None;
    }
    combinations(m.n(), 4)
        .into_iter()
        .map(|s| [s[0], s[1], s[2], s[3]])
        .find(|set| m.s_on(set).is_empty())
        .map(|set| SemifinalViolation::WrongCount { set, count: 0 })
}

pub fn is_semifinal(m: &Structure) -> bool {
    semifinal_violation(m).is_none()
}

pub fn class_d_violation(m: &Structure) -> Option<ClassDViolation> {
    if let Some(&(v, _)) = m.r().iter().find(|(u, v)| u == v) {
        return Some(ClassDViolation::Loop(v));
    }
    if let Some(v) = i3_violation(m).expect("loops handled above") {
        return Some(ClassDViolation::I3(v));
    }
    semifinal_violation(m).map(ClassDViolation::Semifinal)
}

pub fn is_in_class_d(m: &Structure) -> bool {
    class_d_violation(m).is_none()
}

/// The twelve semifinals on a 4-set, each given by its canonical
/// representative tuple, in lexicographic order. Entry 0 is the canonical
/// choice used wherever a semifinal must be picked.
pub fn semifinals_on(set: [usize; 4]) -> [[usize; 4]; 12] {
    let s = sorted4(set);
    let mut reps: Vec<[usize; 4]> = permutations4()
        .iter()
        .map(|p| canonical_rep(p.map(|i| s[i])))
        .collect();
    reps.sort_unstable();
    reps.dedup();
    reps.try_into().expect("24 enumerations collapse 2-to-1")
}

pub fn canonical_semifinal(set: [usize; 4]) -> [[usize; 4]; 2] {
    let t = semifinals_on(set)[0];
    [t, partner(t)]
}

/// All 24 orderings of `0..4` in lexicographic order.
pub fn permutations4() -> [[usize; 4]; 24] {
    let mut out = [[0; 4]; 24];
    let mut k = 0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let t = [a, b, c, d];
                    if sorted4(t) == [0, 1, 2, 3] {
                        out[k] = t;
                        k += 1;
                    }
                }
            }
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// A span `B <- A -> C` with both legs embeddings.
#[derive(Debug, Clone)]
pub struct AmalgamProblem {
    pub a: Structure,
    pub b: Structure,
    pub c: Structure,
    pub i_b: Embedding,
    pub i_c: Embedding,
}

impl AmalgamProblem {
    pub fn new(a: Structure, b: Structure, c: Structure, i_b: Embedding, i_c: Embedding) -> Result<Self> {
        for (name, m) in [("B", &b), ("C", &c)] {
            if let Some(v) = class_d_violation(m) {
                return Err(Error::input(format!("{name} is not in class D: {v:?}")));
            }
        }
        if !i_b.is_valid(&a, &b) {
            return Err(Error::input("i_B is not an embedding A -> B"));
        }
        if !i_c.is_valid(&a, &c) {
            return Err(Error::input("i_C is not an embedding A -> C"));
        }
        Ok(AmalgamProblem { a, b, c, i_b, i_c })
    }

    /// The span where `A` is the substructure of `B` induced on `shared`
    /// and `i_C` is given explicitly.
    pub fn over_substructure(b: Structure, shared: &[usize], c: Structure, i_c: Vec<usize>) -> Result<Self> {
        let (a, verts) = b.induced_substructure(shared)?;
        let i_b = Embedding { map: verts };
        let i_c = Embedding { map: i_c };
        Self::new(a, b, c, i_b, i_c)
    }
}

#[derive(Debug, Clone)]
pub struct Amalgam {
    pub d: Structure,
    pub b_into_d: Embedding,
    pub c_into_d: Embedding,
}

/// Strong amalgam: domain `B \ A`, then `A`, then `C \ A`; every
/// `b in B \ A`, `c in C \ A` gets the edge `(b, c)`; each 4-set lying in
/// neither copy gets the canonical semifinal.
pub fn strong_amalgam(p: &AmalgamProblem) -> Result<Amalgam> {
    for (name, m) in [("B", &p.b), ("C", &p.c)] {
        if let Some(v) = class_d_violation(m) {
            return Err(Error::input(format!("{name} is not in class D: {v:?}")));
        }
    }
    let na = p.a.n();
    let b_only: Vec<usize> = (0..p.b.n()).filter(|v| !p.i_b.map.contains(v)).collect();
    let c_only: Vec<usize> = (0..p.c.n()).filter(|v| !p.i_c.map.contains(v)).collect();
    let nb = b_only.len();
    let n = nb + na + c_only.len();

    let mut b_map = vec![0; p.b.n()];
    for (i, &v) in b_only.iter().enumerate() {
        b_map[v] = i;
    }
    for (a, &v) in p.i_b.map.iter().enumerate() {
        b_map[v] = nb + a;
    }
    let mut c_map = vec![0; p.c.n()];
    for (i, &v) in c_only.iter().enumerate() {
        c_map[v] = nb + na + i;
    }
    for (a, &v) in p.i_c.map.iter().enumerate() {
        c_map[v] = nb + a;
    }

    let mut r: BTreeSet<(usize, usize)> = BTreeSet::new();
    r.extend(p.b.r().iter().map(|&(u, v)| (b_map[u], b_map[v])));
    r.extend(p.c.r().iter().map(|&(u, v)| (c_map[u], c_map[v])));
    for &x in &b_only {
        for &y in &c_only {
            r.insert((b_map[x], c_map[y]));
        }
    }

    let mut s: BTreeSet<[usize; 4]> = BTreeSet::new();
    s.extend(p.b.s().iter().map(|t| t.map(|x| b_map[x])));
    s.extend(p.c.s().iter().map(|t| t.map(|x| c_map[x])));
    let in_b: BTreeSet<usize> = b_map.iter().copied().collect();
    let in_c: BTreeSet<usize> = c_map.iter().copied().collect();
    for set in combinations(n, 4) {
        if set.iter().all(|x| in_b.contains(x)) || set.iter().all(|x| in_c.contains(x)) {
            continue;
        }
        s.extend(canonical_semifinal([set[0], set[1], set[2], set[3]]));
    }

    let name = format!("{}+{}", p.b.name(), p.c.name());
    let d = Structure::new(name, n, r, s)?;
    let b_into_d = Embedding { map: b_map };
    let c_into_d = Embedding { map: c_map };
    debug_assert!(b_into_d.is_valid(&p.b, &d) && c_into_d.is_valid(&p.c, &d));
    Ok(Amalgam { d, b_into_d, c_into_d })
}

/// Exhaustive, duplicate-free listing of the labeled members of the class
/// on `n` vertices, addressable by index.
///
/// Index `i` decodes as `orientation * 12^k + semifinals`, where `k` is the
/// number of 4-sets and the semifinal digits are base 12 with the first
/// 4-set most significant.
#[derive(Debug, Clone)]
pub struct ClassDEnumeration {
    n: usize,
    pairs: Vec<(usize, usize)>,
    orientations: Vec<Vec<u8>>,
    four_sets: Vec<[usize; 4]>,
}

pub fn enumerate_class_d(n: usize) -> Result<ClassDEnumeration> {
    enumerate_class_d_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_class_d_with_cap(n: usize, cap: usize) -> Result<ClassDEnumeration> {
    if n > cap {
        return Err(Error::capacity("class D enumeration size", n as u128, cap as u128));
    }
    let pairs: Vec<(usize, usize)> = combinations(n, 2).into_iter().map(|p| (p[0], p[1])).collect();
    let triples = combinations(n, 3);
    let pos = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).expect("pair");
    let triple_pairs: Vec<[usize; 3]> = triples
        .iter()
        .map(|t| [pos(t[0], t[1]), pos(t[0], t[2]), pos(t[1], t[2])])
        .collect();
    let mut orientations = Vec::new();
    let mut states = vec![0u8; pairs.len()];
    loop {
        if triple_pairs.iter().all(|tp| tp.iter().any(|&i| states[i] != 0)) {
            orientations.push(states.clone());
        }
        let mut i = pairs.len();
        loop {
            if i == 0 {
                let four_sets = combinations(n, 4).into_iter().map(|s| [s[0], s[1], s[2], s[3]]).collect();
                return Ok(ClassDEnumeration {
                    n,
                    pairs,
                    orientations,
                    four_sets,
                });
            }
            i -= 1;
            if states[i] < 2 {
                states[i] += 1;
                break;
            }
            states[i] = 0;
        }
    }
}

impl ClassDEnumeration {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of labeled I3-free oriented graphs on `n` vertices.
    pub fn orientation_count(&self) -> usize {
        self.orientations.len()
    }

    pub fn semifinal_count(&self) -> u128 {
        12u128.pow(self.four_sets.len() as u32)
    }

    pub fn count(&self) -> u128 {
        self.orientations.len() as u128 * self.semifinal_count()
    }

    pub fn get(&self, index: u128) -> Option<Structure> {
        if index >= self.count() {
            return None;
        }
        let per = self.semifinal_count();
        let o = &self.orientations[(index / per) as usize];
        let mut rest = index % per;
        let mut digits = vec![0usize; self.four_sets.len()];
        for d in digits.iter_mut().rev() {
            *d = (rest % 12) as usize;
            rest /= 12;
        }
        let r = self.pairs.iter().zip(o).filter_map(|(&(u, v), &st)| match st {
            1 => Some((u, v)),
            2 => Some((v, u)),
            _ => None,
        });
        let s = self
            .four_sets
            .iter()
            .zip(&digits)
            .map(|(&set, &d)| semifinals_on(set)[d]);
        Some(
            Structure::new(format!("D{}_{}", self.n, index), self.n, r, s)
                .expect("enumerated atoms are in range"),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = Structure> + '_ {
        (0..self.count()).map(|i| self.get(i).expect("in range"))
    }
}

/// A pseudo-random member of the class on `n` vertices, deterministic in
/// `seed`. Uniform when `n` is within the enumeration cap.
pub fn random_class_d(n: usize, seed: u64) -> Structure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Ok(en) = enumerate_class_d(n) {
        let idx = rng.gen_range(0..en.count());
        return en.get(idx).expect("in range").renamed(format!("random_{n}_{seed}"));
    }
    random_class_d_large(n, &mut rng).renamed(format!("random_{n}_{seed}"))
}

/// Adds vertices one at a time, resampling each new vertex's edge states
/// until no anticlique appears, then picks an independent uniform
/// semifinal on every 4-set.
pub fn random_class_d_large(n: usize, rng: &mut impl Rng) -> Structure {
    let mut state = vec![vec![0u8; n]; n];
    for k in 0..n {
        loop {
            for j in 0..k {
                let s = rng.gen_range(0..3u8);
                state[j][k] = s;
            }
            let ok = (0..k).all(|i| {
                (i + 1..k).all(|j| state[i][j] != 0 || state[i][k] != 0 || state[j][k] != 0)
            });
            if ok {
                break;
            }
        }
    }
    let mut r = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            match state[i][j] {
                1 => r.push((i, j)),
                2 => r.push((j, i)),
                _ => {}
            }
        }
    }
    let s: Vec<[usize; 4]> = combinations(n, 4)
        .into_iter()
        .map(|set| semifinals_on([set[0], set[1], set[2], set[3]])[rng.gen_range(0..12)])
        .collect();
    Structure::new("random", n, r, s).expect("in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a4() -> Structure {
        Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn small_structures_are_i3_free() {
        assert!(is_i3_free(&Structure::empty("e", 0)).unwrap());
        assert!(is_i3_free(&Structure::empty("e", 2)).unwrap());
        assert!(is_i3_free(&Structure::new("e", 2, [(1, 0)], []).unwrap()).unwrap());
    }

    #[test]
    fn anticlique_reported() {
        let v = i3_violation(&Structure::empty("e", 3)).unwrap();
        assert_eq!(v, Some(I3Violation::Anticlique([0, 1, 2])));
    }

    #[test]
    fn symmetric_pair_reported() {
        let m = Structure::new("s", 2, [(0, 1), (1, 0)], []).unwrap();
        assert_eq!(i3_violation(&m).unwrap(), Some(I3Violation::Symmetric(0, 1)));
    }

    #[test]
    fn loops_are_input_errors() {
        let f = crate::structure::Flags {
            allow_loops: true,
            undirected: false,
        };
        let m = Structure::with_flags("l", 1, f, [(0, 0)], []).unwrap();
        assert!(i3_violation(&m).is_err());
        assert_eq!(class_d_violation(&m), Some(ClassDViolation::Loop(0)));
    }

    #[test]
    fn semifinal_examples() {
        assert!(is_semifinal(&Structure::empty("e", 3)));
        assert!(is_semifinal(&Structure::new("s", 4, [], [[0, 1, 2, 3]]).unwrap()));
        assert!(!is_semifinal(&Structure::empty("e", 4)));
        let two = Structure::new("s", 4, [], [[0, 1, 2, 3], [0, 2, 1, 3]]).unwrap();
        assert_eq!(
            semifinal_violation(&two),
            Some(SemifinalViolation::WrongCount {
                set: [0, 1, 2, 3],
                count: 4
            })
        );
    }

    #[test]
    fn twelve_semifinals_canonical_first() {
        let all = semifinals_on([3, 1, 0, 2]);
        assert_eq!(all[0], [0, 1, 2, 3]);
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 12);
        assert_eq!(canonical_semifinal([0, 1, 2, 3]), [[0, 1, 2, 3], [2, 3, 0, 1]]);
    }

    #[test]
    fn class_membership_examples() {
        assert!(is_in_class_d(&Structure::empty("e", 0)));
        assert!(is_in_class_d(&a4()));
    }

    #[test]
    fn small_counts() {
        let counts: Vec<u128> = (0..4).map(|n| enumerate_class_d(n).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 1, 3, 26]);
        assert_eq!(enumerate_class_d(4).unwrap().orientation_count(), 636);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_class_d(6), Err(Error::Capacity { .. })));
        assert!(enumerate_class_d_with_cap(6, 6).is_ok());
    }

    #[test]
    fn edge_recipe_in_amalgam() {
        let b = Structure::new("B", 2, [(0, 1)], []).unwrap(); // a=0, b=1
        let c = Structure::new("C", 2, [(1, 0)], []).unwrap(); // a=0, c=1
        let p = AmalgamProblem::over_substructure(b, &[0], c, vec![0]).unwrap();
        let am = strong_amalgam(&p).unwrap();
        // domain: b, a, c
        let r: Vec<_> = am.d.r().iter().copied().collect();
        assert_eq!(r, vec![(0, 2), (1, 0), (2, 1)]);
        assert!(am.d.s().is_empty());
        assert_eq!(am.b_into_d.map, vec![1, 0]);
        assert_eq!(am.c_into_d.map, vec![1, 2]);
    }

    #[test]
    fn amalgam_over_everything_is_identity() {
        let p = AmalgamProblem::over_substructure(a4(), &[0, 1, 2, 3], a4(), vec![0, 1, 2, 3]).unwrap();
        let am = strong_amalgam(&p).unwrap();
        assert!(am.d.same_relations(&a4()));
    }

    #[test]
    fn amalgam_rejects_non_members() {
        let bad = Structure::empty("I3", 3);
        let r = AmalgamProblem::over_substructure(bad, &[], a4(), vec![]);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn random_small_members() {
        for seed in 0..20 {
            let m = random_class_d(3, seed);
            assert!(is_in_class_d(&m));
        }
        assert_eq!(random_class_d(0, 9).n(), 0);
        assert!(is_in_class_d(&random_class_d(8, 1)));
    }
}
