//! Invariant structure on G-sets: orientations without invariant
//! anticliques, semifinal relations fixed by every group element, class
//! members carried by a group's regular action, and nice actions derived
//! from the automorphism group of a fixed ambient structure.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::classd::{is_i3_free, permutations4};
use crate::error::{Error, Result};
use crate::perms::{combinations, contains_c4_or_klein, left_regular_action, FourSubgroupWitness, GroupAction, PermGroup};
use crate::structure::{automorphism_group, partner, Structure};

/// A 3-set all of whose pairs are swapped by some group element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreeSetViolation {
    pub triple: [usize; 3],
    /// Element indices swapping `{t0,t1}`, `{t0,t2}`, `{t1,t2}`.
    pub swappers: [usize; 3],
}

/// A 4-set whose moving stabiliser elements admit no common
/// double-transposition enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourSetViolation {
    pub set: [usize; 4],
    /// Element indices in the setwise but not the pointwise stabiliser.
    pub moving: Vec<usize>,
}

/// Table of swapping elements for every pair of points.
struct Swaps {
    m: usize,
    table: Vec<Option<usize>>,
}

impl Swaps {
    fn new(action: &GroupAction) -> Self {
        let m = action.points();
        let mut table = vec![None; m * m];
        for g in 0..action.group().order() {
            for u in 0..m {
                let v = action.act(g, u);
                if v > u && action.act(g, v) == u && table[u * m + v].is_none() {
                    table[u * m + v] = Some(g);
                    table[v * m + u] = Some(g);
                }
            }
        }
        Swaps { m, table }
    }

    fn get(&self, u: usize, v: usize) -> Option<usize> {
        self.table[u * self.m + v]
    }
}

/// Looks for a 3-set in which every pair is swapped by a group element.
pub fn check_three_set_condition(action: &GroupAction) -> Option<ThreeSetViolation> {
    let swaps = Swaps::new(action);
    let m = action.points();
    for a in 0..m {
        for b in a + 1..m {
            let Some(sab) = swaps.get(a, b) else { continue };
            for c in b + 1..m {
                if let (Some(sac), Some(sbc)) = (swaps.get(a, c), swaps.get(b, c)) {
                    return Some(ThreeSetViolation {
                        triple: [a, b, c],
                        swappers: [sab, sac, sbc],
                    });
                }
            }
        }
    }
    None
}

/// Invariant oriented graph on the points: each orbit of 2-sets whose
/// least member `{u < v}` is not swapped by any element contributes the
/// orbit of `(u, v)`; swapped orbits stay edgeless.
pub fn orient_from_action(
    action: &GroupAction,
) -> std::result::Result<BTreeSet<(usize, usize)>, ThreeSetViolation> {
    if let Some(v) = check_three_set_condition(action) {
        return Err(v);
    }
    let swaps = Swaps::new(action);
    let mut r = BTreeSet::new();
    for orbit in action.orbits(2) {
        let (u, v) = (orbit[0][0], orbit[0][1]);
        if swaps.get(u, v).is_some() {
            continue;
        }
        for g in 0..action.group().order() {
            r.insert((action.act(g, u), action.act(g, v)));
        }
    }
    Ok(r)
}

/// Moving part of the setwise stabiliser of a 4-set.
fn moving_stabilizer(action: &GroupAction, set: &[usize; 4]) -> Vec<usize> {
    action
        .setwise_stabilizer_indices(set)
        .into_iter()
        .filter(|&g| set.iter().any(|&v| action.act(g, v) != v))
        .collect()
}

/// Enumerations `(v0, v1, v2, v3)` of a 4-set under which every moving
/// stabiliser element acts as `(v0 v2)(v1 v3)`, in lexicographic order.
pub fn admissible_enumerations(action: &GroupAction, set: [usize; 4]) -> Vec<[usize; 4]> {
    let mut sorted = set;
    sorted.sort_unstable();
    let moving = moving_stabilizer(action, &sorted);
    permutations4()
        .iter()
        .map(|p| p.map(|i| sorted[i]))
        .filter(|e| {
            moving.iter().all(|&g| {
                action.act(g, e[0]) == e[2]
                    && action.act(g, e[2]) == e[0]
                    && action.act(g, e[1]) == e[3]
                    && action.act(g, e[3]) == e[1]
            })
        })
        .collect()
}

/// Checks every orbit of 4-sets and returns, for each orbit representative
/// (its least member), the least admissible enumeration.
pub fn check_four_set_condition(
    action: &GroupAction,
) -> std::result::Result<Vec<([usize; 4], [usize; 4])>, FourSetViolation> {
    let mut out = Vec::new();
    for orbit in action.orbits(4) {
        let rep = [orbit[0][0], orbit[0][1], orbit[0][2], orbit[0][3]];
        match admissible_enumerations(action, rep).first() {
            Some(&e) => out.push((rep, e)),
            None => {
                return Err(FourSetViolation {
                    set: rep,
                    moving: moving_stabilizer(action, &rep),
                })
            }
        }
    }
    Ok(out)
}

/// Fills every orbit of 4-sets not rejected by `skip` with the orbit of
/// the least admissible enumeration of its least member.
fn fill_semifinal_orbits(
    action: &GroupAction,
    skip: impl Fn(&[usize; 4]) -> bool,
) -> std::result::Result<BTreeSet<[usize; 4]>, FourSetViolation> {
    let mut s = BTreeSet::new();
    let mut done: HashSet<[usize; 4]> = HashSet::new();
    for set in combinations(action.points(), 4) {
        let set = [set[0], set[1], set[2], set[3]];
        if done.contains(&set) || skip(&set) {
            continue;
        }
        let Some(&e) = admissible_enumerations(action, set).first() else {
            return Err(FourSetViolation {
                set,
                moving: moving_stabilizer(action, &set),
            });
        };
        for g in 0..action.group().order() {
            let img = action.act_tuple(g, e);
            s.insert(img);
            s.insert(partner(img));
            let mut key = img;
            key.sort_unstable();
            done.insert(key);
        }
    }
    Ok(s)
}

/// Invariant semifinal relation on the points.
pub fn semifinal_from_action(
    action: &GroupAction,
) -> std::result::Result<BTreeSet<[usize; 4]>, FourSetViolation> {
    fill_semifinal_orbits(action, |_| false)
}

/// Outcome of putting a class member on a group's own elements.
#[derive(Debug, Clone)]
pub enum GroupStructure {
    /// The structure, with the left regular action acting by automorphisms.
    Built {
        structure: Structure,
        action: GroupAction,
    },
    /// The group contains `C4` or `C2 x C2`, so no such structure exists.
    Refused(FourSubgroupWitness),
}

/// A member of the class on the elements of `group`, invariant under left
/// multiplication, or a refusal naming the obstructing subgroup.
pub fn d_structure_on_group(group: Arc<PermGroup>) -> Result<GroupStructure> {
    if let Some(w) = contains_c4_or_klein(&group) {
        return Ok(GroupStructure::Refused(w));
    }
    let action = left_regular_action(group.clone());
    let r = orient_from_action(&action).map_err(|v| {
        Error::integrity(format!("group without C4/Klein has an all-swapped 3-set: {v:?}"))
    })?;
    let s = semifinal_from_action(&action).map_err(|v| {
        Error::integrity(format!("group without C4/Klein fails the 4-set condition: {v:?}"))
    })?;
    let structure = Structure::new(format!("D_on_group_{}", group.order()), group.order(), r, s)?;
    Ok(GroupStructure::Built { structure, action })
}

/// Coordinates of a point of a nice action: an orbit copy tag and a tuple
/// of distinct ambient vertices.
pub type TupleLabel = (usize, Vec<usize>);

/// A faithful action of a group of automorphisms of an ambient structure,
/// in which every point stabiliser is the pointwise stabiliser of a set of
/// at least four ambient vertices.
#[derive(Debug, Clone)]
pub struct NiceAction {
    base: GroupAction,
    ambient: Structure,
    rho: GroupAction,
    hat_table: Vec<Vec<usize>>,
    tuples: Option<Vec<TupleLabel>>,
}

impl NiceAction {
    /// Validates the action and computes every fixed set eagerly.
    pub fn new(base: GroupAction, ambient: Structure) -> Result<Self> {
        Self::build(base, ambient, None, true)
    }

    /// Points given as tuples over the ambient domain; the group acts
    /// coordinatewise and copies are kept apart by their tag.
    pub fn from_tuples(
        group: Arc<PermGroup>,
        ambient: Structure,
        tuples: Vec<TupleLabel>,
    ) -> Result<Self> {
        let base = tuple_action(group, &tuples)?;
        Self::build(base, ambient, Some(tuples), true)
    }

    /// As [`from_tuples`](Self::from_tuples) but without requiring
    /// faithfulness; used for single orbits inside a faithful whole.
    pub(crate) fn from_tuples_local(
        group: Arc<PermGroup>,
        ambient: Structure,
        tuples: Vec<TupleLabel>,
    ) -> Result<Self> {
        let base = tuple_action(group, &tuples)?;
        Self::build(base, ambient, Some(tuples), false)
    }

    fn build(
        base: GroupAction,
        ambient: Structure,
        tuples: Option<Vec<TupleLabel>>,
        require_faithful: bool,
    ) -> Result<Self> {
        let group = base.group().clone();
        if group.degree() != ambient.n() {
            return Err(Error::input("group degree differs from the ambient domain size"));
        }
        if let Some(g) = group.generators().iter().find(|g| !ambient.is_automorphism(g)) {
            return Err(Error::input(format!("{g} is not an automorphism of the ambient structure")));
        }
        if require_faithful && !base.is_faithful() {
            return Err(Error::input("action is not faithful"));
        }
        let rho = GroupAction::natural(group.clone());
        let mut hat_table = Vec::with_capacity(base.points());
        for v in 0..base.points() {
            let stab = base.point_stabilizer(v);
            let hat: Vec<usize> = (0..ambient.n())
                .filter(|&a| stab.iter().all(|&g| rho.act(g, a) == a))
                .collect();
            if hat.len() < 4 {
                return Err(Error::input(format!(
                    "point {v}: stabiliser fixes only {} ambient vertices",
                    hat.len()
                )));
            }
            if rho.pointwise_stabilizer_indices(&hat) != stab {
                return Err(Error::input(format!(
                    "point {v}: stabiliser is not the pointwise stabiliser of its fixed set"
                )));
            }
            hat_table.push(hat);
        }
        let na = NiceAction {
            base,
            ambient,
            rho,
            hat_table,
            tuples,
        };
        na.check_equivariance()?;
        Ok(na)
    }

    fn check_equivariance(&self) -> Result<()> {
        for g in self.group().generator_indices() {
            for v in 0..self.base.points() {
                let moved = self.rho.act_set(g, &self.hat_table[v]);
                if moved != self.hat_table[self.base.act(g, v)] {
                    return Err(Error::integrity(format!(
                        "fixed-set map is not equivariant at point {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &GroupAction {
        &self.base
    }

    pub fn ambient(&self) -> &Structure {
        &self.ambient
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        self.base.group()
    }

    /// The natural action of the group on the ambient domain.
    pub fn rho(&self) -> &GroupAction {
        &self.rho
    }

    pub fn points(&self) -> usize {
        self.base.points()
    }

    /// Ambient vertices fixed by the whole stabiliser of `v`.
    pub fn hat(&self, v: usize) -> &[usize] {
        &self.hat_table[v]
    }

    pub fn tuples(&self) -> Option<&[TupleLabel]> {
        self.tuples.as_deref()
    }
}

fn tuple_action(group: Arc<PermGroup>, tuples: &[TupleLabel]) -> Result<GroupAction> {
    let index: HashMap<&TupleLabel, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    if index.len() != tuples.len() {
        return Err(Error::input("duplicate tuple labels"));
    }
    for (_, t) in tuples {
        let distinct: HashSet<usize> = t.iter().copied().collect();
        if distinct.len() != t.len() || t.iter().any(|&a| a >= group.degree()) {
            return Err(Error::input(format!("tuple {t:?} is not a tuple of distinct vertices")));
        }
    }
    let mut table = Vec::with_capacity(group.order());
    for g in group.elements() {
        let row = tuples
            .iter()
            .map(|(copy, t)| {
                let img = (*copy, t.iter().map(|&a| g.apply(a)).collect::<Vec<_>>());
                index
                    .get(&img)
                    .copied()
                    .ok_or_else(|| Error::input("tuple set is not closed under the group"))
            })
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    let labels = tuples
        .iter()
        .map(|(c, t)| format!("{c}:{}", crate::structure::join(t)))
        .collect();
    GroupAction::from_table(group, tuples.len(), table)?.with_labels(labels)
}

/// The orbit, under `Aut(A)`, of the ascending enumeration of `subset`
/// inside the distinct `|subset|`-tuples of `A`. Returns the action and the
/// index of the ascending enumeration.
pub fn build_nice_orbit(a: &Structure, subset: &[usize]) -> Result<(NiceAction, usize)> {
    let group = Arc::new(automorphism_group(a));
    build_nice_orbit_in(group, a, subset, 0, true)
}

pub(crate) fn build_nice_orbit_in(
    group: Arc<PermGroup>,
    a: &Structure,
    subset: &[usize],
    copy: usize,
    require_faithful: bool,
) -> Result<(NiceAction, usize)> {
    let mut rep: Vec<usize> = subset.to_vec();
    rep.sort_unstable();
    rep.dedup();
    if rep.len() < 4 {
        return Err(Error::input(format!(
            "nice orbits need at least 4 ambient vertices, got {}",
            rep.len()
        )));
    }
    if rep.iter().any(|&x| x >= a.n()) {
        return Err(Error::input("subset leaves the ambient domain"));
    }
    let orbit: BTreeSet<Vec<usize>> = group
        .elements()
        .iter()
        .map(|g| rep.iter().map(|&x| g.apply(x)).collect())
        .collect();
    let tuples: Vec<TupleLabel> = orbit.into_iter().map(|t| (copy, t)).collect();
    let idx = tuples.iter().position(|(_, t)| *t == rep).expect("identity image");
    let na = if require_faithful {
        NiceAction::from_tuples(group, a.clone(), tuples)?
    } else {
        NiceAction::from_tuples_local(group, a.clone(), tuples)?
    };
    Ok((na, idx))
}

/// Orientation of a nice action. Niceness guarantees the 3-set condition,
/// so a violation here is an integrity failure.
pub fn orient_nice(na: &NiceAction) -> Result<BTreeSet<(usize, usize)>> {
    orient_checked(na.base())
}

pub(crate) fn orient_checked(action: &GroupAction) -> Result<BTreeSet<(usize, usize)>> {
    let r = orient_from_action(action).map_err(|v| {
        Error::integrity(format!("nice action has a 3-set with all pairs swapped: {v:?}"))
    })?;
    let check = Structure::new("orientation", action.points(), r.iter().copied(), [])?;
    if !is_i3_free(&check)? {
        return Err(Error::integrity("orientation of a nice action is not I3-free"));
    }
    Ok(r)
}

/// A partial invariant semifinal relation supported on a union of orbits
/// of 4-sets.
#[derive(Debug, Clone, Default)]
pub struct PartialSemifinal {
    /// Sorted 4-sets.
    pub p: BTreeSet<[usize; 4]>,
    pub s_tilde: BTreeSet<[usize; 4]>,
}

impl PartialSemifinal {
    pub fn validate(&self, action: &GroupAction) -> Result<()> {
        let mut per_set: HashMap<[usize; 4], Vec<[usize; 4]>> = HashMap::new();
        for &t in &self.s_tilde {
            let mut set = t;
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) || set[3] >= action.points() {
                return Err(Error::input(format!("bad tuple {t:?} in partial semifinal")));
            }
            if !self.p.contains(&set) {
                return Err(Error::input(format!("tuple {t:?} lies outside P")));
            }
            per_set.entry(set).or_default().push(t);
        }
        for set in &self.p {
            let ts = per_set.get(set).map(|v| v.as_slice()).unwrap_or(&[]);
            if ts.len() != 2 || partner(ts[0]) != ts[1] {
                return Err(Error::input(format!("4-set {set:?} in P does not carry one semifinal")));
            }
        }
        for g in action.group().generator_indices() {
            for set in &self.p {
                let img = action.act_set(g, set);
                if !self.p.contains(&[img[0], img[1], img[2], img[3]]) {
                    return Err(Error::input("P is not a union of orbits"));
                }
            }
            for &t in &self.s_tilde {
                if !self.s_tilde.contains(&action.act_tuple(g, t)) {
                    return Err(Error::input("partial semifinal is not invariant"));
                }
            }
        }
        Ok(())
    }
}

/// Extends an invariant partial semifinal relation to every 4-set, orbit
/// by orbit, using the least admissible enumeration of each orbit's least
/// member.
pub fn complete_semifinal(na: &NiceAction, ps: &PartialSemifinal) -> Result<BTreeSet<[usize; 4]>> {
    ps.validate(na.base())?;
    let filled = fill_semifinal_orbits(na.base(), |set| ps.p.contains(set)).map_err(|v| {
        Error::integrity(format!("nice action has a 4-set without admissible enumeration: {v:?}"))
    })?;
    let mut s = ps.s_tilde.clone();
    s.extend(filled);
    Ok(s)
}

/// Checks that every 4-set of a nice action admits an admissible
/// enumeration.
pub fn check_nice_four_sets(na: &NiceAction) -> Result<usize> {
    let mut checked = 0;
    for set in combinations(na.points(), 4) {
        let set = [set[0], set[1], set[2], set[3]];
        if admissible_enumerations(na.base(), set).is_empty() {
            return Err(Error::integrity(format!("4-set {set:?} of a nice action has no admissible enumeration")));
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classd::is_in_class_d;
    use crate::perms::{catalog, Permutation};

    fn action(n: usize, gens: &[&[usize]]) -> GroupAction {
        let gens = gens.iter().map(|g| Permutation::new(g.to_vec()).unwrap()).collect();
        GroupAction::natural(Arc::new(PermGroup::closure(n, gens).unwrap()))
    }

    fn a4() -> Structure {
        Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn three_set_condition_examples() {
        assert!(check_three_set_condition(&action(3, &[])).is_none());
        let v = check_three_set_condition(&action(3, &[&[1, 0, 2], &[1, 2, 0]])).unwrap();
        assert_eq!(v.triple, [0, 1, 2]);
        assert!(check_three_set_condition(&action(3, &[&[1, 0, 2]])).is_none());
    }

    #[test]
    fn orientation_examples() {
        let r = orient_from_action(&action(3, &[])).unwrap();
        assert_eq!(r, BTreeSet::from([(0, 1), (0, 2), (1, 2)]));
        let r = orient_from_action(&action(3, &[&[1, 0, 2]])).unwrap();
        assert_eq!(r, BTreeSet::from([(0, 2), (1, 2)]));
        let err = orient_from_action(&action(3, &[&[1, 0, 2], &[1, 2, 0]])).unwrap_err();
        assert_eq!(err.triple, [0, 1, 2]);
    }

    #[test]
    fn four_set_condition_examples() {
        assert!(check_four_set_condition(&action(4, &[])).is_ok());
        let reps = check_four_set_condition(&action(4, &[&[1, 0, 3, 2]])).unwrap();
        assert_eq!(reps, vec![([0, 1, 2, 3], [0, 2, 1, 3])]);
        let err = check_four_set_condition(&action(4, &[&[1, 2, 3, 0]])).unwrap_err();
        assert_eq!(err.set, [0, 1, 2, 3]);
    }

    #[test]
    fn semifinal_examples() {
        let s = semifinal_from_action(&action(4, &[])).unwrap();
        assert_eq!(s, BTreeSet::from([[0, 1, 2, 3], [2, 3, 0, 1]]));
        let s = semifinal_from_action(&action(4, &[&[1, 0, 3, 2]])).unwrap();
        assert!(s.contains(&[0, 2, 1, 3]) && s.contains(&[1, 3, 0, 2]));
        assert!(semifinal_from_action(&action(4, &[&[1, 2, 3, 0]])).is_err());
    }

    #[test]
    fn c6_carries_a_class_member() {
        let g = catalog::group("C6").unwrap();
        match d_structure_on_group(g).unwrap() {
            GroupStructure::Built { structure, action } => {
                assert!(is_in_class_d(&structure));
                assert!(action.is_faithful());
                for gi in 0..action.group().order() {
                    let p = Permutation::new(action.row(gi).to_vec()).unwrap();
                    assert!(structure.is_automorphism(&p));
                }
            }
            GroupStructure::Refused(_) => panic!("C6 must succeed"),
        }
    }

    #[test]
    fn klein_refused() {
        let g = catalog::group("C2xC2").unwrap();
        assert!(matches!(d_structure_on_group(g).unwrap(), GroupStructure::Refused(_)));
    }

    #[test]
    fn nice_orbit_of_a4() {
        let (na, rep) = build_nice_orbit(&a4(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(na.points(), 2);
        assert_eq!(na.hat(rep), &[0, 1, 2, 3]);
        assert!(na.base().point_stabilizer(rep).len() == 1);
        // the two enumerations are swapped: no edge
        assert!(orient_nice(&na).unwrap().is_empty());
    }

    #[test]
    fn nice_orbit_needs_four_vertices() {
        assert!(matches!(build_nice_orbit(&a4(), &[0, 1, 2]), Err(Error::Input(_))));
    }

    #[test]
    fn trivial_group_nice_action_gets_ascending_tournament() {
        // transitive tournament on 4 points with canonical semifinal: rigid
        let a = Structure::new(
            "tt4",
            4,
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            [[0, 1, 2, 3]],
        )
        .unwrap();
        let (na, _) = build_nice_orbit(&a, &[0, 1, 2, 3]).unwrap();
        assert_eq!(na.points(), 1);
        assert!(orient_nice(&na).unwrap().is_empty());
        let s = complete_semifinal(&na, &PartialSemifinal::default()).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn complete_semifinal_keeps_total_input() {
        let (na, _) = build_nice_orbit(&a4(), &[0, 1, 2, 3]).unwrap();
        let ps = PartialSemifinal::default();
        assert!(complete_semifinal(&na, &ps).unwrap().is_empty());
    }

    #[test]
    fn partial_semifinal_validation() {
        let act = action(4, &[]);
        let ps = PartialSemifinal {
            p: BTreeSet::from([[0, 1, 2, 3]]),
            s_tilde: BTreeSet::new(),
        };
        assert!(ps.validate(&act).is_err());
        let ps = PartialSemifinal {
            p: BTreeSet::new(),
            s_tilde: BTreeSet::from([[0, 1, 2, 3], [2, 3, 0, 1]]),
        };
        assert!(ps.validate(&act).is_err());
    }
}
