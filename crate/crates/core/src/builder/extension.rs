use std::collections::HashSet;

use serde::Serialize;

use crate::classd::{binomial, is_in_class_d, semifinals_on};
use crate::error::{Error, Result};
use crate::perms::combinations;
use crate::structure::{partner, qftp, LinkType, Slot, Structure};

/// Upper limit on the number of link types enumerated over a single base.
pub const LINK_TYPE_CAP: u128 = 1_000_000;

fn check_base(m: &Structure, c0: &[usize]) -> Result<()> {
    if c0.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input(format!("base {c0:?} is not strictly ascending")));
    }
    if c0.last().is_some_and(|&c| c >= m.n()) {
        return Err(Error::input(format!("base {c0:?} leaves the domain")));
    }
    Ok(())
}

/// Every type of a new point over `c0` whose one-point extension stays in
/// the class: each base vertex gets no edge, an edge in, or an edge out,
/// with every non-adjacent base pair covered by the new point; each 3-subset
/// of the base gets one of the twelve semifinals with the new point.
/// Sorted ascending.
pub fn all_link_types(m: &Structure, c0: &[usize]) -> Result<Vec<LinkType>> {
    check_base(m, c0)?;
    let k = c0.len();
    let triples = combinations(k, 3);
    let count = 3u128.pow(k as u32) * 12u128.pow(triples.len() as u32);
    if count > LINK_TYPE_CAP {
        return Err(Error::capacity("link types over one base", count, LINK_TYPE_CAP));
    }
    let open_pairs: Vec<(usize, usize)> = combinations(k, 2)
        .into_iter()
        .map(|p| (p[0], p[1]))
        .filter(|&(i, j)| !m.has_edge(c0[i], c0[j]) && !m.has_edge(c0[j], c0[i]))
        .collect();
    let local = semifinals_on([0, 1, 2, 3]);
    let options: Vec<Vec<[[Slot; 4]; 2]>> = triples
        .iter()
        .map(|tri| {
            let slot = |i: usize| if i == 3 { Slot::New } else { Slot::Old(c0[tri[i]]) };
            local
                .iter()
                .map(|t| [t.map(slot), partner(*t).map(slot)])
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut states = vec![0u8; k];
    for code in 0..3usize.pow(k as u32) {
        let mut c = code;
        for s in states.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        if open_pairs.iter().any(|&(i, j)| states[i] == 0 && states[j] == 0) {
            continue;
        }
        let mut base = LinkType::empty(c0.to_vec());
        for (i, &s) in states.iter().enumerate() {
            match s {
                1 => {
                    base.r_in.insert(c0[i]);
                }
                2 => {
                    base.r_out.insert(c0[i]);
                }
                _ => {}
            }
        }
        let mut choice = vec![0usize; triples.len()];
        loop {
            let mut t = base.clone();
            for (opts, &ch) in options.iter().zip(&choice) {
                t.s_tuples.extend(opts[ch]);
            }
            out.push(t);
            let mut i = choice.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if choice[i] < 11 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
            }
            if choice.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The induced structure on `link.base` (renumbered ascending) with one new
/// vertex carrying the link's atoms.
pub fn one_point_extension(m: &Structure, link: &LinkType) -> Result<Structure> {
    check_base(m, &link.base)?;
    link.validate()?;
    let (sub, verts) = m.induced_substructure(&link.base)?;
    let k = verts.len();
    let pos = |x: usize| verts.iter().position(|&v| v == x).expect("validated base");
    let mut r: Vec<(usize, usize)> = link.r_in.iter().map(|&c| (pos(c), k)).collect();
    r.extend(link.r_out.iter().map(|&c| (k, pos(c))));
    if link.self_loop {
        r.push((k, k));
    }
    let s: Vec<[usize; 4]> = link
        .s_tuples
        .iter()
        .map(|t| {
            t.map(|slot| match slot {
                Slot::Old(c) => pos(c),
                Slot::New => k,
            })
        })
        .collect();
    sub.extended(format!("{}+new", sub.name()), 1, r, s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnrealizedType {
    pub base: Vec<usize>,
    pub link: LinkType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub size_bound: usize,
    /// Only bases inside `0..within` were checked, when set.
    pub within: Option<usize>,
    pub bases_checked: usize,
    pub types_checked: usize,
    pub unrealized: Vec<UnrealizedType>,
}

impl ExtensionReport {
    pub fn satisfied(&self) -> bool {
        self.unrealized.is_empty()
    }
}

/// For every base of at most `s` vertices and every class-consistent link
/// type over it, whether some vertex outside the base realizes the type.
pub fn verify_extension_property(m: &Structure, s: usize) -> Result<ExtensionReport> {
    verify_extension_property_within(m, s, None)
}

/// As [`verify_extension_property`], restricted to bases inside the first
/// `within` vertices. Realizing vertices may lie anywhere.
pub fn verify_extension_property_within(
    m: &Structure,
    s: usize,
    within: Option<usize>,
) -> Result<ExtensionReport> {
    if !is_in_class_d(m) {
        return Err(Error::input(format!("{} is not in the class", m.name())));
    }
    let dom = within.unwrap_or(m.n()).min(m.n());
    let mut report = ExtensionReport {
        size_bound: s,
        within,
        bases_checked: 0,
        types_checked: 0,
        unrealized: Vec::new(),
    };
    let total: u128 = (0..=s.min(dom)).map(|k| binomial(dom, k)).sum();
    if total > LINK_TYPE_CAP {
        return Err(Error::capacity("extension-property bases", total, LINK_TYPE_CAP));
    }
    for k in 0..=s.min(dom) {
        for base in combinations(dom, k) {
            report.bases_checked += 1;
            let realized: HashSet<LinkType> = (0..m.n())
                .filter(|w| !base.contains(w))
                .map(|w| qftp(m, w, &base))
                .collect::<Result<_>>()?;
            for t in all_link_types(m, &base)? {
                report.types_checked += 1;
                if !realized.contains(&t) {
                    report.unrealized.push(UnrealizedType {
                        base: base.clone(),
                        link: t,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn a4() -> Structure {
        Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn type_counts_over_small_bases() {
        let m = a4();
        assert_eq!(all_link_types(&m, &[]).unwrap().len(), 1);
        assert_eq!(all_link_types(&m, &[0]).unwrap().len(), 3);
        // {0,1} adjacent: all nine states
        assert_eq!(all_link_types(&m, &[0, 1]).unwrap().len(), 9);
        // {0,2} not adjacent: the new point must see one of them
        assert_eq!(all_link_types(&m, &[0, 2]).unwrap().len(), 8);
        assert_eq!(all_link_types(&m, &[0, 1, 2]).unwrap().len(), (27 - 3) * 12);
    }

    #[test]
    fn every_link_type_extends_inside_the_class() {
        let m = a4();
        for base in [vec![0, 2], vec![0, 1, 3]] {
            for t in all_link_types(&m, &base).unwrap() {
                t.validate().unwrap();
                assert!(is_in_class_d(&one_point_extension(&m, &t).unwrap()));
            }
        }
    }

    #[test]
    fn empty_base_is_satisfied() {
        let r = verify_extension_property(&a4(), 0).unwrap();
        assert!(r.satisfied());
        assert_eq!(r.bases_checked, 1);
    }

    #[test]
    fn single_edge_misses_types() {
        let m = Structure::new("edge", 2, [(0, 1)], []).unwrap();
        let r = verify_extension_property(&m, 2).unwrap();
        assert!(!r.satisfied());
        let dominated_by_both = r.unrealized.iter().any(|u| {
            u.base == vec![0, 1] && u.link.r_in == BTreeSet::from([0, 1])
        });
        assert!(dominated_by_both);
    }

    #[test]
    fn unsorted_base_rejected() {
        assert!(all_link_types(&a4(), &[1, 0]).is_err());
    }
}
