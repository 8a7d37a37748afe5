//! Exhaustive reference computations, written without the orbit machinery
//! so they can cross-check it: invariant relations found by trying every
//! assignment, subgroup detection by closing pairs, and vertex-by-vertex
//! counting of I3-free oriented graphs.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::actions::{
    check_four_set_condition, check_three_set_condition, d_structure_on_group, orient_from_action,
    semifinal_from_action, GroupStructure,
};
use crate::classd::is_in_class_d;
use crate::error::Result;
use crate::perms::{catalog, contains_c4_or_klein, FourSubgroupKind, GroupAction, PermGroup, Permutation};

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn generator_rows(action: &GroupAction) -> Vec<Vec<usize>> {
    action
        .group()
        .generator_indices()
        .into_iter()
        .map(|g| action.row(g).to_vec())
        .collect()
}

/// Whether some assignment of none / forward / backward to every pair is
/// both I3-free and invariant under every generator.
pub fn invariant_i3_orientation_exists(action: &GroupAction) -> bool {
    let m = action.points();
    let pairs = subsets(m, 2);
    let triples = subsets(m, 3);
    let gens = generator_rows(action);
    let pair_index = |a: usize, b: usize| -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|p| p[0] == a && p[1] == b).unwrap()
    };
    // edge state of (u, v): 0 none, 1 u->v, 2 v->u, relative to u < v
    let mut states = vec![0u8; pairs.len()];
    let total = 3usize.pow(pairs.len() as u32);
    for code in 0..total {
        let mut c = code;
        for s in states.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        let edge = |u: usize, v: usize| -> bool {
            let s = states[pair_index(u, v)];
            if u < v {
                s == 1
            } else {
                s == 2
            }
        };
        let anticlique = triples.iter().any(|t| {
            states[pair_index(t[0], t[1])] == 0
                && states[pair_index(t[0], t[2])] == 0
                && states[pair_index(t[1], t[2])] == 0
        });
        if anticlique {
            continue;
        }
        let invariant = gens.iter().all(|g| {
            (0..m).all(|u| (0..m).all(|v| u == v || edge(u, v) == edge(g[u], g[v])))
        });
        if invariant {
            return true;
        }
    }
    false
}

/// The twelve semifinals of a sorted 4-set, each as the smaller tuple of
/// its partner pair, found by listing all 24 orderings and merging
/// partners.
pub fn semifinal_classes(set: [usize; 4]) -> Vec<[usize; 4]> {
    let mut out = BTreeSet::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let idx = [a, b, c, d];
                    let distinct: BTreeSet<usize> = idx.iter().copied().collect();
                    if distinct.len() < 4 {
                        continue;
                    }
                    let t = idx.map(|i| set[i]);
                    let p = [t[2], t[3], t[0], t[1]];
                    out.insert(t.min(p));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Whether some choice of one semifinal per 4-set is invariant under every
/// generator.
pub fn invariant_semifinal_exists(action: &GroupAction) -> bool {
    let m = action.points();
    let sets: Vec<[usize; 4]> = subsets(m, 4).into_iter().map(|s| [s[0], s[1], s[2], s[3]]).collect();
    let classes: Vec<Vec<[usize; 4]>> = sets.iter().map(|&s| semifinal_classes(s)).collect();
    let gens = generator_rows(action);
    let set_index = |t: [usize; 4]| -> usize {
        let mut s = t;
        s.sort_unstable();
        sets.iter().position(|&x| x == s).unwrap()
    };
    let mut choice = vec![0usize; sets.len()];
    let total = 12usize.pow(sets.len() as u32);
    for code in 0..total {
        let mut c = code;
        for x in choice.iter_mut() {
            *x = c % 12;
            c /= 12;
        }
        let ok = gens.iter().all(|g| {
            (0..sets.len()).all(|i| {
                let t = classes[i][choice[i]];
                let img = t.map(|x| g[x]);
                let j = set_index(img);
                let chosen = classes[j][choice[j]];
                img == chosen || [img[2], img[3], img[0], img[1]] == chosen
            })
        });
        if ok {
            return true;
        }
    }
    false
}

/// Whether the group has a subgroup of order four, found by closing every
/// pair of elements.
pub fn has_subgroup_of_order_four(group: &PermGroup) -> bool {
    let elems = group.elements();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i..] {
            let mut seen: BTreeSet<Permutation> = BTreeSet::from([Permutation::identity(group.degree())]);
            let mut frontier: Vec<Permutation> = vec![Permutation::identity(group.degree())];
            while let Some(x) = frontier.pop() {
                for g in [a, b] {
                    let y = g.compose(&x);
                    if seen.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
                if seen.len() > 4 {
                    break;
                }
            }
            if seen.len() == 4 {
                return true;
            }
        }
    }
    false
}

/// Number of labeled I3-free oriented graphs on `n` vertices, counted by
/// adding one vertex at a time and pruning anticliques early.
pub fn count_i3_free_by_extension(n: usize) -> u128 {
    fn go(k: usize, n: usize, adj: &mut Vec<Vec<bool>>) -> u128 {
        if k == n {
            return 1;
        }
        let mut total = 0;
        let choices = 3usize.pow(k as u32);
        for code in 0..choices {
            let mut c = code;
            for u in 0..k {
                let s = c % 3;
                c /= 3;
                adj[u][k] = s == 1;
                adj[k][u] = s == 2;
            }
            let linked = |x: usize, y: usize| adj[x][y] || adj[y][x];
            let bad = (0..k).any(|a| (a + 1..k).any(|b| !linked(a, b) && !linked(a, k) && !linked(b, k)));
            if !bad {
                total += go(k + 1, n, adj);
            }
        }
        for u in 0..k {
            adj[u][k] = false;
            adj[k][u] = false;
        }
        total
    }
    let mut adj = vec![vec![false; n]; n];
    go(0, n, &mut adj)
}

/// Faithful actions on at most five points built from the catalog's regular
/// and natural representations of groups of order at most eight: each
/// representation, its direct sum with itself, padded with fixed points.
pub fn small_catalog_actions() -> Vec<(String, GroupAction)> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<(usize, Vec<Permutation>)> = BTreeSet::new();
    let mut reps: Vec<(String, Arc<PermGroup>)> = Vec::new();
    for name in catalog::names() {
        if let Some(g) = catalog::group(name) {
            reps.push((format!("{name}/regular"), g));
        }
        if let Some(g) = catalog::natural(name) {
            reps.push((format!("{name}/natural"), g));
        }
    }
    for (label, g) in reps {
        if g.order() > 8 {
            continue;
        }
        let d = g.degree();
        let mut bases: Vec<(String, usize, Vec<Vec<usize>>)> = vec![(
            label.clone(),
            d,
            g.generators().iter().map(|p| p.images().to_vec()).collect(),
        )];
        if 2 * d <= 5 && d > 0 {
            let doubled = g
                .generators()
                .iter()
                .map(|p| {
                    let mut v = p.images().to_vec();
                    v.extend(p.images().iter().map(|&x| x + d));
                    v
                })
                .collect();
            bases.push((format!("{label}+{label}"), 2 * d, doubled));
        }
        for (base_label, deg, gens) in bases {
            for m in deg.max(1)..=5 {
                let padded: Vec<Permutation> = gens
                    .iter()
                    .map(|v| {
                        let mut v = v.clone();
                        v.extend(deg..m);
                        Permutation::new(v).expect("padded permutation")
                    })
                    .collect();
                let group = PermGroup::closure(m, padded).expect("small closure");
                if !seen.insert((m, group.elements().to_vec())) {
                    continue;
                }
                let name = if m > deg {
                    format!("{base_label} pad {m}")
                } else {
                    base_label.clone()
                };
                out.push((name, GroupAction::natural(Arc::new(group))));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LemmaSuiteReport {
    pub actions: usize,
    pub three_set_positive: usize,
    pub four_set_checked: usize,
    pub four_set_positive: usize,
    pub discrepancies: Vec<String>,
}

impl LemmaSuiteReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares both orbit conditions with the exhaustive searches over
/// [`small_catalog_actions`], and checks the constructed relations for
/// invariance.
pub fn lemma_equivalence_suite() -> LemmaSuiteReport {
    let mut rep = LemmaSuiteReport::default();
    for (name, action) in small_catalog_actions() {
        rep.actions += 1;
        let fast = check_three_set_condition(&action).is_none();
        let slow = invariant_i3_orientation_exists(&action);
        if fast != slow {
            rep.discrepancies
                .push(format!("{name}: 3-set condition {fast}, exhaustive search {slow}"));
        }
        if fast {
            rep.three_set_positive += 1;
            let r = orient_from_action(&action).expect("condition holds");
            if !relation_invariant(&action, &r, |g, &(u, v)| (action.act(g, u), action.act(g, v))) {
                rep.discrepancies.push(format!("{name}: orientation not invariant"));
            }
        }
        if action.points() >= 4 {
            rep.four_set_checked += 1;
            let fast = check_four_set_condition(&action).is_ok();
            let slow = invariant_semifinal_exists(&action);
            if fast != slow {
                rep.discrepancies
                    .push(format!("{name}: 4-set condition {fast}, exhaustive search {slow}"));
            }
            if fast {
                rep.four_set_positive += 1;
                let s = semifinal_from_action(&action).expect("condition holds");
                if !relation_invariant(&action, &s, |g, t| action.act_tuple(g, *t)) {
                    rep.discrepancies.push(format!("{name}: semifinal not invariant"));
                }
            }
        }
    }
    rep
}

fn relation_invariant<T: Ord + Clone>(
    action: &GroupAction,
    rel: &BTreeSet<T>,
    apply: impl Fn(usize, &T) -> T,
) -> bool {
    (0..action.group().order()).all(|g| rel.iter().map(|x| apply(g, x)).collect::<BTreeSet<T>>() == *rel)
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSweepEntry {
    pub name: String,
    pub order: usize,
    pub built: bool,
    pub refusal: Option<FourSubgroupKind>,
    /// Exhaustive subgroup search agrees with the refusal.
    pub oracle_agrees: bool,
    pub in_class_d: bool,
    pub faithful: bool,
    pub by_automorphisms: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSweepReport {
    pub entries: Vec<GroupSweepEntry>,
    pub discrepancies: Vec<String>,
}

impl GroupSweepReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Puts a class member on every catalog group where possible, and checks
/// success against the absence of `C4` and `C2 x C2` subgroups.
pub fn group_structure_sweep() -> Result<GroupSweepReport> {
    let mut entries = Vec::new();
    let mut discrepancies = Vec::new();
    for (name, group) in catalog::all() {
        let has_four = has_subgroup_of_order_four(&group);
        let detected = contains_c4_or_klein(&group).is_some();
        let mut e = GroupSweepEntry {
            name: name.to_string(),
            order: group.order(),
            built: false,
            refusal: None,
            oracle_agrees: has_four == detected,
            in_class_d: false,
            faithful: false,
            by_automorphisms: false,
        };
        match d_structure_on_group(group.clone())? {
            GroupStructure::Built { structure, action } => {
                e.built = true;
                e.in_class_d = is_in_class_d(&structure);
                e.faithful = action.is_faithful();
                e.by_automorphisms = (0..group.order()).all(|g| {
                    Permutation::new(action.row(g).to_vec()).is_ok_and(|p| structure.is_automorphism(&p))
                });
                if detected || !e.in_class_d || !e.faithful || !e.by_automorphisms {
                    discrepancies.push(format!("{name}: built structure fails a check"));
                }
            }
            GroupStructure::Refused(w) => {
                e.refusal = Some(w.kind);
                if !detected {
                    discrepancies.push(format!("{name}: refused without a witness subgroup"));
                }
            }
        }
        if !e.oracle_agrees {
            discrepancies.push(format!("{name}: subgroup detection disagrees with exhaustive search"));
        }
        entries.push(e);
    }
    Ok(GroupSweepReport { entries, discrepancies })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i3_free_counts() {
        let counts: Vec<u128> = (0..=5).map(count_i3_free_by_extension).collect();
        assert_eq!(counts, vec![1, 1, 3, 26, 636, 43168]);
    }

    #[test]
    fn sweep_over_catalog() {
        let r = group_structure_sweep().unwrap();
        assert!(r.passed(), "{:?}", r.discrepancies);
        let c6 = r.entries.iter().find(|e| e.name == "C6").unwrap();
        assert!(c6.built);
    }

    #[test]
    fn twelve_semifinals() {
        assert_eq!(semifinal_classes([0, 1, 2, 3]).len(), 12);
    }

    #[test]
    fn order_four_subgroups() {
        assert!(has_subgroup_of_order_four(&catalog::group("C4").unwrap()));
        assert!(has_subgroup_of_order_four(&catalog::group("C2xC2").unwrap()));
        assert!(!has_subgroup_of_order_four(&catalog::group("C6").unwrap()));
        assert!(!has_subgroup_of_order_four(&catalog::group("S3").unwrap()));
    }

    #[test]
    fn s3_has_no_invariant_orientation() {
        let s3 = catalog::natural("S3").unwrap();
        assert!(!invariant_i3_orientation_exists(&GroupAction::natural(s3)));
    }

    #[test]
    fn catalog_actions_are_faithful_and_small() {
        let acts = small_catalog_actions();
        assert!(acts.len() > 20);
        for (name, a) in &acts {
            assert!(a.points() <= 5, "{name}");
            assert!(a.is_faithful(), "{name}");
            assert!(a.group().order() <= 8, "{name}");
        }
    }
}
