//! Permutations, explicit permutation groups, and group actions on
//! abstract point sets.

mod action;
pub mod catalog;
pub mod format;
mod group;
mod permutation;

pub use action::{combinations, left_regular_action, GroupAction};
pub use group::{closure_cap, PermGroup, CLOSURE_CAP_ENV, DEFAULT_CLOSURE_CAP};
pub use permutation::Permutation;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FourSubgroupKind {
    Cyclic4,
    Klein,
}

/// A subgroup of order four isomorphic to `C4` or `C2 x C2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourSubgroupWitness {
    pub kind: FourSubgroupKind,
    /// Element indices into the ambient group, identity first.
    pub elements: [usize; 4],
}

/// Looks for an element of order 4, then for two distinct commuting
/// involutions.
pub fn contains_c4_or_klein(group: &PermGroup) -> Option<FourSubgroupWitness> {
    let id = group.identity_index();
    for g in 0..group.order() {
        if group.element_order(g) == 4 {
            let g2 = group.mul(g, g);
            let g3 = group.mul(g2, g);
            return Some(FourSubgroupWitness {
                kind: FourSubgroupKind::Cyclic4,
                elements: [id, g, g2, g3],
            });
        }
    }
    let involutions: Vec<usize> = (0..group.order())
        .filter(|&g| group.element_order(g) == 2)
        .collect();
    for (i, &a) in involutions.iter().enumerate() {
        for &b in &involutions[i + 1..] {
            let ab = group.mul(a, b);
            if ab == group.mul(b, a) {
                return Some(FourSubgroupWitness {
                    kind: FourSubgroupKind::Klein,
                    elements: [id, a, b, ab],
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_detected() {
        let g = catalog::group("C2xC2").unwrap();
        let w = contains_c4_or_klein(&g).unwrap();
        assert_eq!(w.kind, FourSubgroupKind::Klein);
    }

    #[test]
    fn c6_has_neither() {
        assert!(contains_c4_or_klein(&catalog::group("C6").unwrap()).is_none());
    }

    #[test]
    fn q8_has_order_four_element() {
        let w = contains_c4_or_klein(&catalog::group("Q8").unwrap()).unwrap();
        assert_eq!(w.kind, FourSubgroupKind::Cyclic4);
    }
}
