//! Finite relational structures over one binary relation `R` and one 4-ary
//! relation `S`, with substructures, quantifier-free types and exhaustive
//! isomorphism search.

pub mod format;
mod link;
mod search;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perms::Permutation;

pub use link::{qftp, realizes, LinkType, Slot};
pub use search::{
    are_isomorphic, automorphism_group, automorphisms, automorphisms_extending, find_embeddings,
    find_embeddings_limited, is_ultrahomogeneous, Embedding, Ultrahomogeneity,
};

/// `(a, b, c, d) -> (c, d, a, b)`.
#[inline]
pub fn partner(t: [usize; 4]) -> [usize; 4] {
    [t[2], t[3], t[0], t[1]]
}

/// The lexicographically smaller of a tuple and its partner.
#[inline]
pub fn canonical_rep(t: [usize; 4]) -> [usize; 4] {
    t.min(partner(t))
}

#[inline]
pub fn sorted4(t: [usize; 4]) -> [usize; 4] {
    let mut s = t;
    s.sort_unstable();
    s
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub allow_loops: bool,
    /// `R` is symmetric; used for plain graphs.
    pub undirected: bool,
}

/// Relation state of an unordered pair `{u, v}` as seen from `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PairState {
    None,
    /// `R(u, v)` only.
    Out,
    /// `R(v, u)` only.
    In,
    Both,
}

/// A finite structure on the domain `0..n`.
#[derive(Clone)]
pub struct Structure {
    name: String,
    n: usize,
    flags: Flags,
    r: BTreeSet<(usize, usize)>,
    s: BTreeSet<[usize; 4]>,
    adj: Vec<bool>,
    s_by_set: HashMap<[usize; 4], Vec<[usize; 4]>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.same_relations(other)
    }
}

impl Eq for Structure {}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Structure")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("flags", &self.flags)
            .field("r", &self.r)
            .field("s", &self.s.iter().filter(|t| **t == canonical_rep(**t)).collect::<Vec<_>>())
            .finish()
    }
}

impl Structure {
    /// A structure without loops or undirected flag.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        r: impl IntoIterator<Item = (usize, usize)>,
        s: impl IntoIterator<Item = [usize; 4]>,
    ) -> Result<Self> {
        Self::with_flags(name, n, Flags::default(), r, s)
    }

    /// Validates ranges, closes `S` under the partner map, and symmetrises
    /// `R` when the structure is undirected.
    pub fn with_flags(
        name: impl Into<String>,
        n: usize,
        flags: Flags,
        r: impl IntoIterator<Item = (usize, usize)>,
        s: impl IntoIterator<Item = [usize; 4]>,
    ) -> Result<Self> {
        let mut rel = BTreeSet::new();
        for (u, v) in r {
            if u >= n || v >= n {
                return Err(Error::input(format!("R atom ({u},{v}) out of range 0..{n}")));
            }
            if u == v && !flags.allow_loops {
                return Err(Error::input(format!("loop ({u},{u}) without allow_loops")));
            }
            rel.insert((u, v));
            if flags.undirected {
                rel.insert((v, u));
            }
        }
        let mut srel = BTreeSet::new();
        for t in s {
            if t.iter().any(|&x| x >= n) {
                return Err(Error::input(format!("S tuple {t:?} out of range 0..{n}")));
            }
            let st = sorted4(t);
            if st.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("S tuple {t:?} has repeated entries")));
            }
            srel.insert(t);
            srel.insert(partner(t));
        }
        Ok(Self::assemble(name.into(), n, flags, rel, srel))
    }

    pub fn empty(name: impl Into<String>, n: usize) -> Self {
        Self::assemble(name.into(), n, Flags::default(), BTreeSet::new(), BTreeSet::new())
    }

    fn assemble(
        name: String,
        n: usize,
        flags: Flags,
        r: BTreeSet<(usize, usize)>,
        s: BTreeSet<[usize; 4]>,
    ) -> Self {
        let mut adj = vec![false; n * n];
        for &(u, v) in &r {
            adj[u * n + v] = true;
        }
        let mut s_by_set: HashMap<[usize; 4], Vec<[usize; 4]>> = HashMap::new();
        for &t in &s {
            s_by_set.entry(sorted4(t)).or_default().push(t);
        }
        Structure {
            name,
            n,
            flags,
            r,
            s,
            adj,
            s_by_set,
        }
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut out = self.clone();
        out.name = name.into();
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn r(&self) -> &BTreeSet<(usize, usize)> {
        &self.r
    }

    /// All `S` tuples, partner-closed.
    pub fn s(&self) -> &BTreeSet<[usize; 4]> {
        &self.s
    }

    /// Compares domain size, flags and relations, ignoring the name.
    pub fn same_relations(&self, other: &Structure) -> bool {
        self.n == other.n && self.flags == other.flags && self.r == other.r && self.s == other.s
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    pub fn pair_state(&self, u: usize, v: usize) -> PairState {
        match (self.has_edge(u, v), self.has_edge(v, u)) {
            (false, false) => PairState::None,
            (true, false) => PairState::Out,
            (false, true) => PairState::In,
            (true, true) => PairState::Both,
        }
    }

    /// `S` tuples whose underlying set is the sorted 4-set `set`.
    pub fn s_on(&self, set: &[usize; 4]) -> &[[usize; 4]] {
        self.s_by_set.get(set).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Sorted 4-sets carrying at least one `S` tuple.
    pub fn s_sets(&self) -> impl Iterator<Item = &[usize; 4]> {
        self.s_by_set.keys()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&w| self.has_edge(v, w)).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&w| self.has_edge(w, v)).count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    /// Image of the structure under a permutation of its domain.
    pub fn permuted(&self, p: &Permutation) -> Structure {
        let r = self.r.iter().map(|&(u, v)| (p.apply(u), p.apply(v))).collect();
        let s = self.s.iter().map(|t| t.map(|x| p.apply(x))).collect();
        Self::assemble(self.name.clone(), self.n, self.flags, r, s)
    }

    /// Relation-by-relation check that `p` maps the structure onto itself.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.n
            && self.r.iter().all(|&(u, v)| self.has_edge(p.apply(u), p.apply(v)))
            && self.s.iter().all(|t| self.s.contains(&t.map(|x| p.apply(x))))
    }

    /// The substructure induced on `subset`, renumbered by increasing
    /// original index. Returns the renumbering (new index -> old vertex).
    pub fn induced_substructure(&self, subset: &[usize]) -> Result<(Structure, Vec<usize>)> {
        let mut verts: Vec<usize> = subset.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if let Some(&v) = verts.iter().find(|&&v| v >= self.n) {
            return Err(Error::input(format!("vertex {v} out of range 0..{}", self.n)));
        }
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let r = self
            .r
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]))
            .collect();
        let s = if verts.len() < 4 {
            BTreeSet::new()
        } else {
            self.s
                .iter()
                .filter(|t| t.iter().all(|&x| pos[x] != usize::MAX))
                .map(|t| t.map(|x| pos[x]))
                .collect()
        };
        let name = format!("{}[{}]", self.name, join(&verts));
        Ok((Self::assemble(name, verts.len(), self.flags, r, s), verts))
    }

    /// Adds `extra` fresh vertices and relation atoms to a copy of `self`.
    pub fn extended(
        &self,
        name: impl Into<String>,
        extra: usize,
        r: impl IntoIterator<Item = (usize, usize)>,
        s: impl IntoIterator<Item = [usize; 4]>,
    ) -> Result<Structure> {
        Self::with_flags(
            name,
            self.n + extra,
            self.flags,
            self.r.iter().copied().chain(r),
            self.s.iter().copied().chain(s),
        )
    }
}

pub(crate) fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn a4() -> Structure {
        Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn partner_closure_applied() {
        let a = a4();
        assert!(a.s().contains(&[2, 3, 0, 1]));
        assert_eq!(a.s().len(), 2);
    }

    #[test]
    fn loops_need_flag() {
        assert!(Structure::new("x", 1, [(0, 0)], []).is_err());
        let f = Flags {
            allow_loops: true,
            undirected: false,
        };
        assert!(Structure::with_flags("x", 1, f, [(0, 0)], []).is_ok());
    }

    #[test]
    fn s_tuple_with_repeats_rejected() {
        assert!(Structure::new("x", 4, [], [[0, 0, 1, 2]]).is_err());
    }

    #[test]
    fn induced_identity_and_path() {
        let a = a4();
        let (whole, map) = a.induced_substructure(&[0, 1, 2, 3]).unwrap();
        assert!(whole.same_relations(&a));
        assert_eq!(map, vec![0, 1, 2, 3]);
        let (p, _) = a.induced_substructure(&[0, 1, 2]).unwrap();
        assert_eq!(p.r().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(p.s().is_empty());
        assert!(a.induced_substructure(&[0, 7]).is_err());
    }

    #[test]
    fn undirected_symmetrises() {
        let f = Flags {
            allow_loops: false,
            undirected: true,
        };
        let g = Structure::with_flags("p", 3, f, [(0, 1), (1, 2)], []).unwrap();
        assert!(g.has_edge(1, 0) && g.has_edge(2, 1));
        assert_eq!(g.r().len(), 4);
    }
}
