use std::sync::Arc;

use serde::Serialize;

use crate::actions::{d_structure_on_group, GroupStructure};
use crate::error::{Error, Result};
use crate::perms::{catalog, GroupAction, PermGroup};
use crate::structure::{automorphism_group, Structure};

/// `Aut(A)` for a structure on fewer than four vertices, embedded into the
/// cyclic group of order six, together with the class member that group
/// carries.
#[derive(Debug, Clone)]
pub struct SmallGroupEmbedding {
    pub aut: PermGroup,
    pub c6: Arc<PermGroup>,
    /// `map[i]` is the index in `c6` of the image of element `i` of `aut`.
    pub map: Vec<usize>,
    pub structure: Structure,
    pub action: GroupAction,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallGroupSummary {
    pub aut_order: usize,
    pub images: Vec<String>,
    pub structure_size: usize,
}

impl SmallGroupEmbedding {
    pub fn summary(&self) -> SmallGroupSummary {
        SmallGroupSummary {
            aut_order: self.aut.order(),
            images: self.map.iter().map(|&i| self.c6.element(i).to_string()).collect(),
            structure_size: self.structure.n(),
        }
    }
}

pub fn small_group_embedding(a: &Structure) -> Result<SmallGroupEmbedding> {
    if a.n() >= 4 {
        return Err(Error::input("small_group_embedding takes structures on fewer than 4 vertices"));
    }
    let aut = automorphism_group(a);
    let k = aut.order();
    if 6 % k != 0 || !aut.is_cyclic() {
        return Err(Error::integrity(format!("automorphism group of order {k} does not embed in C6")));
    }
    let c6 = catalog::group("C6").expect("catalog has C6");
    let g6 = (0..c6.order()).find(|&i| c6.element_order(i) == 6).expect("C6 is cyclic");
    let a_gen = (0..k).find(|&i| aut.element_order(i) == k).expect("cyclic");
    let step = 6 / k;
    let power = |base: usize, e: usize, group: &PermGroup| -> usize {
        (0..e).fold(group.identity_index(), |acc, _| group.mul(base, acc))
    };
    let mut map = vec![0usize; k];
    for i in 0..k {
        map[power(a_gen, i, &aut)] = power(g6, step * i, &c6);
    }
    for x in 0..k {
        for y in 0..k {
            if map[aut.mul(x, y)] != c6.mul(map[x], map[y]) {
                return Err(Error::integrity("embedding into C6 is not a homomorphism"));
            }
        }
    }
    let GroupStructure::Built { structure, action } = d_structure_on_group(c6.clone())? else {
        return Err(Error::integrity("C6 was refused"));
    };
    Ok(SmallGroupEmbedding {
        aut,
        c6,
        map,
        structure,
        action,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classd::is_in_class_d;

    #[test]
    fn single_vertex() {
        let e = small_group_embedding(&Structure::empty("pt", 1)).unwrap();
        assert_eq!(e.aut.order(), 1);
        assert_eq!(e.map, vec![0]);
        assert!(is_in_class_d(&e.structure));
    }

    #[test]
    fn two_points_map_to_involution() {
        let e = small_group_embedding(&Structure::empty("two", 2)).unwrap();
        assert_eq!(e.aut.order(), 2);
        assert_eq!(e.c6.element_order(e.map[1]), 2);
    }

    #[test]
    fn three_cycle_maps_to_order_three() {
        let c3 = Structure::new("c3", 3, [(0, 1), (1, 2), (2, 0)], []).unwrap();
        let e = small_group_embedding(&c3).unwrap();
        assert_eq!(e.aut.order(), 3);
        assert!(e.map[1..].iter().all(|&i| e.c6.element_order(i) == 3));
        assert!(e.action.is_faithful());
    }
}
