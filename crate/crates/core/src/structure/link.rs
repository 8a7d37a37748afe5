use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perms::combinations;
use crate::structure::{sorted4, Structure};

/// A position in a one-point-extension type: an existing base vertex or the
/// new point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    Old(usize),
    New,
}

impl Slot {
    pub fn resolve(self, new: usize) -> usize {
        match self {
            Slot::Old(v) => v,
            Slot::New => new,
        }
    }
}

/// The quantifier-free type of a new point over an ordered base set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LinkType {
    pub base: Vec<usize>,
    /// Base vertices `c` with `R(c, new)`.
    pub r_in: BTreeSet<usize>,
    /// Base vertices `c` with `R(new, c)`.
    pub r_out: BTreeSet<usize>,
    /// `R(new, new)`; only ever set in structures that allow loops.
    pub self_loop: bool,
    /// `S` tuples over `base ∪ {new}` that mention the new point.
    pub s_tuples: BTreeSet<[Slot; 4]>,
}

impl LinkType {
    pub fn empty(base: Vec<usize>) -> Self {
        LinkType {
            base,
            r_in: BTreeSet::new(),
            r_out: BTreeSet::new(),
            self_loop: false,
            s_tuples: BTreeSet::new(),
        }
    }

    /// Structural checks independent of any ambient structure: `r_in` and
    /// `r_out` disjoint subsets of the base, `S` tuples over base and new
    /// point with distinct entries, closed under the partner map.
    pub fn validate(&self) -> Result<()> {
        let base: BTreeSet<usize> = self.base.iter().copied().collect();
        if base.len() != self.base.len() {
            return Err(Error::input("link base has repeated vertices"));
        }
        if !self.r_in.is_subset(&base) || !self.r_out.is_subset(&base) {
            return Err(Error::input("link edges leave the base"));
        }
        if self.r_in.intersection(&self.r_out).next().is_some() {
            return Err(Error::input("link has an edge in both directions"));
        }
        for t in &self.s_tuples {
            if !t.contains(&Slot::New) {
                return Err(Error::input("link S tuple does not mention the new point"));
            }
            let mut olds: Vec<usize> = t
                .iter()
                .filter_map(|s| match s {
                    Slot::Old(v) => Some(*v),
                    Slot::New => None,
                })
                .collect();
            if olds.iter().any(|v| !base.contains(v)) {
                return Err(Error::input("link S tuple leaves the base"));
            }
            olds.sort_unstable();
            olds.dedup();
            if olds.len() != 3 {
                return Err(Error::input("link S tuple has repeated entries"));
            }
            if !self.s_tuples.contains(&[t[2], t[3], t[0], t[1]]) {
                return Err(Error::input("link S tuples are not partner-closed"));
            }
        }
        Ok(())
    }

    /// The `S` tuples with the new point replaced by `new`.
    pub fn s_tuples_at(&self, new: usize) -> impl Iterator<Item = [usize; 4]> + '_ {
        self.s_tuples.iter().map(move |t| t.map(|s| s.resolve(new)))
    }
}

/// The quantifier-free type of `v` over `base`.
pub fn qftp(m: &Structure, v: usize, base: &[usize]) -> Result<LinkType> {
    if v >= m.n() {
        return Err(Error::input(format!("vertex {v} out of range")));
    }
    if let Some(&c) = base.iter().find(|&&c| c >= m.n()) {
        return Err(Error::input(format!("base vertex {c} out of range")));
    }
    if base.contains(&v) {
        return Err(Error::input(format!("vertex {v} lies in the base")));
    }
    let mut t = LinkType::empty(base.to_vec());
    t.self_loop = m.has_loop(v);
    for &c in base {
        if m.has_edge(c, v) {
            t.r_in.insert(c);
        }
        if m.has_edge(v, c) {
            t.r_out.insert(c);
        }
    }
    if base.len() >= 3 && !m.s().is_empty() {
        for tri in combinations(base.len(), 3) {
            let set = sorted4([base[tri[0]], base[tri[1]], base[tri[2]], v]);
            for tup in m.s_on(&set) {
                t.s_tuples
                    .insert(tup.map(|x| if x == v { Slot::New } else { Slot::Old(x) }));
            }
        }
    }
    Ok(t)
}

/// Whether `w` has type `t` over `t.base`.
pub fn realizes(m: &Structure, w: usize, t: &LinkType) -> Result<bool> {
    if t.base.contains(&w) {
        return Err(Error::input(format!("vertex {w} lies in the base")));
    }
    Ok(qftp(m, w, &t.base)? == *t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a4() -> Structure {
        Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn empty_base_gives_empty_type() {
        let t = qftp(&a4(), 2, &[]).unwrap();
        assert_eq!(t, LinkType::empty(vec![]));
    }

    #[test]
    fn type_of_zero_over_rest() {
        let t = qftp(&a4(), 0, &[1, 2, 3]).unwrap();
        assert_eq!(t.r_out, BTreeSet::from([1]));
        assert_eq!(t.r_in, BTreeSet::from([3]));
        let expect = BTreeSet::from([
            [Slot::New, Slot::Old(1), Slot::Old(2), Slot::Old(3)],
            [Slot::Old(2), Slot::Old(3), Slot::New, Slot::Old(1)],
        ]);
        assert_eq!(t.s_tuples, expect);
        t.validate().unwrap();
    }

    #[test]
    fn vertex_in_base_is_an_error() {
        assert!(qftp(&a4(), 1, &[1, 2]).is_err());
    }

    #[test]
    fn realizes_detects_direction_change() {
        let m = a4();
        let t = qftp(&m, 1, &[0, 2]).unwrap();
        assert!(realizes(&m, 1, &qftp(&m, 1, &[0, 2]).unwrap()).unwrap());
        assert!(!realizes(&m, 3, &t).unwrap());
    }
}
