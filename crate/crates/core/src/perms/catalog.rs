//! Bundled small groups, each given by generators of its left regular
//! representation. A few also ship a small-degree natural representation.

use std::sync::Arc;

use crate::perms::format::parse_group;
use crate::perms::PermGroup;

macro_rules! catalog_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../catalog/", $name, ".grp")))),*]
    };
}

const REGULAR: &[(&str, &str)] = catalog_files!(
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C2xC2",
    "C2xC4", "C2xC6", "C3xC3", "S3", "D4", "D6", "Q8", "A4", "Dic3",
);

const NATURAL: &[(&str, &str)] = &[
    ("C2", include_str!("../../catalog/C2.natural.grp")),
    ("C3", include_str!("../../catalog/C3.natural.grp")),
    ("C4", include_str!("../../catalog/C4.natural.grp")),
    ("C5", include_str!("../../catalog/C5.natural.grp")),
    ("C6", include_str!("../../catalog/C6.natural.grp")),
    ("C2xC2", include_str!("../../catalog/C2xC2.natural.grp")),
    ("S3", include_str!("../../catalog/S3.natural.grp")),
    ("D4", include_str!("../../catalog/D4.natural.grp")),
    ("A4", include_str!("../../catalog/A4.natural.grp")),
];

pub fn names() -> Vec<&'static str> {
    REGULAR.iter().map(|(n, _)| *n).collect()
}

/// The regular representation of a catalog group.
pub fn group(name: &str) -> Option<Arc<PermGroup>> {
    REGULAR
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_group(text).expect("bundled catalog parses").group)
}

/// A small-degree faithful representation, when one is bundled.
pub fn natural(name: &str) -> Option<Arc<PermGroup>> {
    NATURAL
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_group(text).expect("bundled catalog parses").group)
}

/// Every catalog group in its regular representation.
pub fn all() -> Vec<(&'static str, Arc<PermGroup>)> {
    names()
        .into_iter()
        .map(|n| (n, group(n).expect("listed")))
        .collect()
}

/// Raw text of a bundled group file.
pub fn source(name: &str) -> Option<&'static str> {
    REGULAR.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_names() {
        let expect = [
            ("C1", 1), ("C7", 7), ("C12", 12), ("C2xC2", 4), ("C2xC4", 8), ("C2xC6", 12),
            ("C3xC3", 9), ("S3", 6), ("D4", 8), ("D6", 12), ("Q8", 8), ("A4", 12), ("Dic3", 12),
        ];
        for (n, o) in expect {
            let g = group(n).unwrap();
            assert_eq!(g.order(), o, "{n}");
            assert_eq!(g.degree(), o, "{n} is regular");
        }
    }

    #[test]
    fn natural_representations_are_faithful_images() {
        for (n, _) in NATURAL {
            assert_eq!(natural(n).unwrap().order(), group(n).unwrap().order(), "{n}");
        }
    }

    #[test]
    fn abelian_and_cyclic_flags() {
        assert!(group("C3xC3").unwrap().is_abelian());
        assert!(!group("C3xC3").unwrap().is_cyclic());
        assert!(!group("S3").unwrap().is_abelian());
        assert!(!group("Q8").unwrap().is_abelian());
        assert!(group("C10").unwrap().is_cyclic());
    }
}
