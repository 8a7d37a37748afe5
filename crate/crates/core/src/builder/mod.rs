//! Finite approximations of the limit structure carrying a faithful action
//! of `Aut(A)`, built by realizing one-point extensions on nice orbits; the
//! extension-property verifier; and the graph tower with its automorphism
//! extension maps.

mod extension;
mod small;
mod tower;

pub use extension::{
    all_link_types, one_point_extension, verify_extension_property, verify_extension_property_within,
    ExtensionReport, UnrealizedType, LINK_TYPE_CAP,
};
pub use small::{small_group_embedding, SmallGroupEmbedding};
pub use tower::{check_tower_witnesses, rado_tower, TowerStage};

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::actions::{build_nice_orbit, complete_semifinal, orient_checked, orient_nice, NiceAction, PartialSemifinal, TupleLabel};
use crate::classd::{canonical_semifinal, class_d_violation, is_in_class_d};
use crate::error::{Error, Result};
use crate::perms::{combinations, PermGroup, Permutation};
use crate::structure::{automorphism_group, qftp, sorted4, LinkType, Slot, Structure};

/// A class member with a faithful nice action of `Aut(A)` by automorphisms.
#[derive(Debug, Clone)]
pub struct NiceGStructure {
    structure: Structure,
    action: NiceAction,
}

impl NiceGStructure {
    pub fn new(structure: Structure, action: NiceAction) -> Result<Self> {
        if structure.n() != action.points() {
            return Err(Error::input("structure and action have different point counts"));
        }
        if let Some(v) = class_d_violation(&structure) {
            return Err(Error::integrity(format!("{} left the class: {v:?}", structure.name())));
        }
        if !action.base().is_faithful() {
            return Err(Error::integrity("action is not faithful"));
        }
        for g in action.group().generator_indices() {
            let p = Permutation::new(action.base().row(g).to_vec())?;
            if !structure.is_automorphism(&p) {
                return Err(Error::integrity(format!(
                    "group element {} does not act by automorphisms",
                    action.group().element(g)
                )));
            }
        }
        Ok(NiceGStructure { structure, action })
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn action(&self) -> &NiceAction {
        &self.action
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    /// Each group element as a permutation of the domain.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        (0..self.action.group().order())
            .map(|g| Permutation::new(self.action.base().row(g).to_vec()).expect("action row"))
            .collect()
    }

    fn tuples(&self) -> &[TupleLabel] {
        self.action.tuples().expect("builder stages carry tuple labels")
    }

    fn renamed(self, name: String) -> Self {
        NiceGStructure {
            structure: self.structure.renamed(name),
            action: self.action,
        }
    }
}

/// A one-point extension to realize: the type of a new point over `c0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExtensionTask {
    pub c0: Vec<usize>,
    pub link: LinkType,
}

impl ExtensionTask {
    pub fn new(link: LinkType) -> Self {
        ExtensionTask {
            c0: link.base.clone(),
            link,
        }
    }

    /// The task's base lies in `m` and its one-point extension is in the
    /// class.
    pub fn validate(&self, m: &Structure) -> Result<()> {
        if self.c0 != self.link.base {
            return Err(Error::input("task base differs from its link base"));
        }
        let ext = one_point_extension(m, &self.link)?;
        if let Some(v) = class_d_violation(&ext) {
            return Err(Error::input(format!("one-point extension leaves the class: {v:?}")));
        }
        Ok(())
    }
}

/// The stage-zero structure: the orbit of the ascending enumeration of the
/// whole of `A`, oriented and completed.
pub fn initial_stage(a: &Structure) -> Result<NiceGStructure> {
    let dom: Vec<usize> = (0..a.n()).collect();
    let (na, _) = build_nice_orbit(a, &dom)?;
    let r = orient_nice(&na)?;
    let s = complete_semifinal(&na, &PartialSemifinal::default())?;
    let m = Structure::new("M0", na.points(), r, s)?;
    NiceGStructure::new(m, na)
}

/// Adds a nice orbit `N` containing a vertex `e` of type `task.link` over
/// `task.c0`. Returns the extended structure and `e`.
pub fn extend_by_one_type(b0: &NiceGStructure, task: &ExtensionTask) -> Result<(NiceGStructure, usize)> {
    if task.c0.is_empty() {
        return Err(Error::input("the empty base is realized in place, not by a new orbit"));
    }
    task.validate(b0.structure())?;
    if task.link.self_loop {
        return Err(Error::input("class members have no loops"));
    }
    let na0 = b0.action();
    let group: Arc<PermGroup> = na0.group().clone();
    let ambient = na0.ambient().clone();
    let n0 = b0.n();

    // the orbit of the ascending enumeration of the union of the fixed sets
    let a_prime: BTreeSet<usize> = task.c0.iter().flat_map(|&v| na0.hat(v).iter().copied()).collect();
    let rep: Vec<usize> = a_prime.into_iter().collect();
    let copy = b0.tuples().iter().map(|(c, _)| c + 1).max().unwrap_or(0);
    let orbit: BTreeSet<Vec<usize>> = group
        .elements()
        .iter()
        .map(|g| rep.iter().map(|&x| g.apply(x)).collect())
        .collect();
    let new_tuples: Vec<TupleLabel> = orbit.into_iter().map(|t| (copy, t)).collect();
    let k = new_tuples.len();
    let e = n0 + new_tuples.iter().position(|(_, t)| *t == rep).expect("identity image");
    let mut tuples = b0.tuples().to_vec();
    tuples.extend(new_tuples);
    let na = NiceAction::from_tuples(group.clone(), ambient, tuples)?;
    let act = na.base();

    let stab_e = act.point_stabilizer(e);
    if stab_e != act.pointwise_stabilizer_indices(&task.c0) {
        return Err(Error::integrity("stabiliser of the new point differs from that of its base"));
    }

    // edges between N and B0, transported from e
    let c0: BTreeSet<usize> = task.c0.iter().copied().collect();
    let mut cross: HashMap<(usize, usize), bool> = HashMap::new();
    for g in 0..group.order() {
        let u = act.act(g, e);
        for w in 0..n0 {
            // atoms(e, w) for w = g^-1 applied to the target
            let out = if c0.contains(&w) {
                if task.link.r_out.contains(&w) {
                    Some(true)
                } else if task.link.r_in.contains(&w) {
                    Some(false)
                } else {
                    None
                }
            } else {
                Some(true)
            };
            let Some(out) = out else { continue };
            let gw = act.act(g, w);
            if let Some(&prev) = cross.get(&(u, gw)) {
                if prev != out {
                    return Err(Error::integrity(format!("inconsistent transport on pair ({u},{gw})")));
                }
            }
            cross.insert((u, gw), out);
        }
    }
    // transports that leave a pair edgeless must agree too
    for g in 0..group.order() {
        let u = act.act(g, e);
        for &w in &c0 {
            if !task.link.r_out.contains(&w) && !task.link.r_in.contains(&w) && cross.contains_key(&(u, act.act(g, w))) {
                return Err(Error::integrity(format!("inconsistent transport on pair ({u},{})", act.act(g, w))));
            }
        }
    }
    let mut r: BTreeSet<(usize, usize)> = b0.structure().r().clone();
    for (&(u, w), &out) in &cross {
        r.insert(if out { (u, w) } else { (w, u) });
    }
    let n_points: Vec<usize> = (n0..n0 + k).collect();
    let inner = orient_checked(&act.restrict(&n_points)?)?;
    r.extend(inner.into_iter().map(|(a, b)| (n0 + a, n0 + b)));

    // S on mixed 4-sets: one point of N, three of B0
    let link_s: BTreeSet<[usize; 4]> = task.link.s_tuples_at(e).collect();
    let mut link_by_set: HashMap<[usize; 4], Vec<[usize; 4]>> = HashMap::new();
    for &t in &link_s {
        link_by_set.entry(sorted4(t)).or_default().push(t);
    }
    let mut s_tilde: BTreeSet<[usize; 4]> = b0.structure().s().clone();
    let mut p: BTreeSet<[usize; 4]> = b0.structure().s_sets().copied().collect();
    if p.len() != combinations(n0, 4).len() {
        return Err(Error::integrity("previous stage is not semifinal"));
    }
    for u in n0..n0 + k {
        for tri in combinations(n0, 3) {
            let set = sorted4([tri[0], tri[1], tri[2], u]);
            if p.contains(&set) {
                continue;
            }
            let orbit: Vec<[usize; 4]> = (0..group.order())
                .map(|g| {
                    let img = act.act_set(g, &set);
                    [img[0], img[1], img[2], img[3]]
                })
                .collect();
            let seed: Vec<[usize; 4]> = match orbit.iter().find_map(|w| link_by_set.get(w)) {
                Some(ts) => ts.clone(),
                None => canonical_semifinal(set).to_vec(),
            };
            for g in 0..group.order() {
                for &t in &seed {
                    s_tilde.insert(act.act_tuple(g, t));
                }
            }
            p.extend(orbit);
        }
    }
    let ps = PartialSemifinal { p, s_tilde };
    let s = complete_semifinal(&na, &ps)?;
    let structure = Structure::new(b0.structure().name(), n0 + k, r, s)?;
    let out = NiceGStructure::new(structure, na)?;
    if qftp(out.structure(), e, &task.c0)? != task.link {
        return Err(Error::integrity(format!("new point {e} does not realize its scheduled type")));
    }
    if !same_on_prefix(out.structure(), b0.structure()) {
        return Err(Error::integrity("extension changed the previous stage"));
    }
    Ok((out, e))
}

/// Whether `big` restricted to the domain of `small` equals `small`.
fn same_on_prefix(big: &Structure, small: &Structure) -> bool {
    let n = small.n();
    big.r().iter().filter(|&&(u, v)| u < n && v < n).eq(small.r().iter())
        && big.s().iter().filter(|t| t.iter().all(|&x| x < n)).eq(small.s().iter())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizedTask {
    pub round: usize,
    pub task: ExtensionTask,
    pub vertex: usize,
    /// Size of the orbit added for the task; zero when realized in place.
    pub orbit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduledTask {
    pub round: usize,
    pub task: ExtensionTask,
}

/// Task queue plus the log of realizing vertices.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Schedule {
    pub queue: std::collections::VecDeque<ScheduledTask>,
    pub realized: Vec<RealizedTask>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub ambient: String,
    pub group_order: usize,
    pub rounds: usize,
    pub size_bound: usize,
    pub budget: usize,
    /// Point counts of the stages, starting with stage zero.
    pub stage_sizes: Vec<usize>,
    pub realized: Vec<RealizedTask>,
    /// Tasks scheduled but left unrealized because of the budget.
    pub unrealized: Vec<ScheduledTask>,
    pub complete: bool,
    pub faithful: bool,
    pub in_class_d: bool,
    pub nice: bool,
}

#[derive(Debug, Clone)]
pub struct UniversalBuild {
    /// Stage zero and the structure after each round.
    pub stages: Vec<NiceGStructure>,
    pub report: BuildReport,
}

impl UniversalBuild {
    pub fn last(&self) -> &NiceGStructure {
        self.stages.last().expect("stage zero is always present")
    }
}

/// Tasks of one round in the fixed order: base size, base, link type.
/// Only bases meeting the newest stage are scheduled, earlier bases having
/// been served by earlier rounds.
fn round_tasks(m: &Structure, prev_n: usize, fresh_from: usize, size_bound: usize) -> Result<Vec<ExtensionTask>> {
    let mut tasks = Vec::new();
    for k in 0..=size_bound.min(prev_n) {
        for c0 in combinations(prev_n, k) {
            let fresh = if fresh_from == 0 {
                true
            } else {
                c0.iter().any(|&v| v >= fresh_from)
            };
            if !fresh {
                continue;
            }
            for link in all_link_types(m, &c0)? {
                tasks.push(ExtensionTask { c0: c0.clone(), link });
            }
        }
    }
    Ok(tasks)
}

/// Bookkeeping construction over `A`: stage zero from the orbit of an
/// enumeration of `A`, then `rounds` rounds, each realizing every type over
/// every base of at most `size_bound` vertices of the previous stage.
/// `budget` bounds the total number of points.
pub fn build_universal_action(a: &Structure, rounds: usize, size_bound: usize, budget: usize) -> Result<UniversalBuild> {
    if a.n() < 4 {
        return Err(Error::input(format!(
            "{} has {} vertices; structures with fewer than 4 use small_group_embedding",
            a.name(),
            a.n()
        )));
    }
    if let Some(v) = class_d_violation(a) {
        return Err(Error::input(format!("{} is not in the class: {v:?}", a.name())));
    }
    let m0 = initial_stage(a)?;
    let group_order = m0.action().group().order();
    let mut stages = vec![m0.clone()];
    let mut schedule = Schedule::default();
    let mut unrealized = Vec::new();
    let mut current = m0;
    let mut fresh_from = 0;
    let mut exhausted = false;
    for round in 1..=rounds {
        let prev_n = current.n();
        for task in round_tasks(current.structure(), prev_n, fresh_from, size_bound)? {
            schedule.queue.push_back(ScheduledTask { round, task });
        }
        while let Some(st) = schedule.queue.pop_front() {
            if st.task.c0.is_empty() {
                // any vertex realizes the empty type
                schedule.realized.push(RealizedTask {
                    round,
                    task: st.task,
                    vertex: 0,
                    orbit_size: 0,
                });
                continue;
            }
            if exhausted {
                unrealized.push(st);
                continue;
            }
            let orbit = orbit_size_for(&current, &st.task.c0);
            if current.n() + orbit > budget {
                exhausted = true;
                unrealized.push(st);
                continue;
            }
            let (next, e) = extend_by_one_type(&current, &st.task)?;
            schedule.realized.push(RealizedTask {
                round,
                task: st.task,
                vertex: e,
                orbit_size: next.n() - current.n(),
            });
            current = next;
        }
        let stage = current.clone().renamed(format!("M{round}"));
        check_stage_coherence(stages.last().expect("nonempty"), &stage)?;
        stages.push(stage.clone());
        current = stage;
        fresh_from = prev_n;
        if exhausted {
            break;
        }
    }
    let last = stages.last().expect("nonempty");
    let nice = (0..last.n()).all(|v| last.action().hat(v).len() >= 4);
    let report = BuildReport {
        ambient: a.name().to_string(),
        group_order,
        rounds,
        size_bound,
        budget,
        stage_sizes: stages.iter().map(|s| s.n()).collect(),
        realized: schedule.realized,
        complete: unrealized.is_empty(),
        unrealized,
        faithful: last.action().base().is_faithful(),
        in_class_d: is_in_class_d(last.structure()),
        nice,
    };
    Ok(UniversalBuild { stages, report })
}

fn orbit_size_for(m: &NiceGStructure, c0: &[usize]) -> usize {
    let na = m.action();
    let a_prime: BTreeSet<usize> = c0.iter().flat_map(|&v| na.hat(v).iter().copied()).collect();
    let fixing = na.rho().pointwise_stabilizer_indices(&a_prime.into_iter().collect::<Vec<_>>());
    na.group().order() / fixing.len()
}

/// The later stage extends the earlier one: same relations on the old
/// domain, same action on old points, faithful.
fn check_stage_coherence(prev: &NiceGStructure, next: &NiceGStructure) -> Result<()> {
    if !same_on_prefix(next.structure(), prev.structure()) {
        return Err(Error::integrity("stage does not extend its predecessor"));
    }
    let n = prev.n();
    for g in 0..prev.action().group().order() {
        if next.action().base().row(g)[..n] != *prev.action().base().row(g) {
            return Err(Error::integrity("stage action does not extend its predecessor"));
        }
    }
    if !next.action().base().is_faithful() {
        return Err(Error::integrity("stage action is not faithful"));
    }
    Ok(())
}

/// Group of the ambient structure, as used by the builder.
pub fn ambient_group(a: &Structure) -> Arc<PermGroup> {
    Arc::new(automorphism_group(a))
}

/// Whether every logged vertex realizes its task in `m`.
pub fn check_realized_log(m: &Structure, log: &[RealizedTask]) -> Result<bool> {
    for r in log {
        if r.task.c0.is_empty() {
            if m.n() == 0 {
                return Ok(false);
            }
            continue;
        }
        if !crate::structure::realizes(m, r.vertex, &r.task.link)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Link type of a dominating vertex: edges out to all of `c0` and the
/// canonical semifinal with the new point last on each 3-subset.
pub fn dominating_type(c0: &[usize]) -> LinkType {
    let mut t = LinkType::empty(c0.to_vec());
    t.r_out = c0.iter().copied().collect();
    for tri in combinations(c0.len(), 3) {
        let a = Slot::Old(c0[tri[0]]);
        let b = Slot::Old(c0[tri[1]]);
        let c = Slot::Old(c0[tri[2]]);
        t.s_tuples.insert([a, b, c, Slot::New]);
        t.s_tuples.insert([c, Slot::New, a, b]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::check_nice_four_sets;

    fn a4() -> Structure {
        Structure::new("A4", 4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn initial_stage_of_a4() {
        let m0 = initial_stage(&a4()).unwrap();
        assert_eq!(m0.n(), 2);
        assert!(m0.structure().r().is_empty());
    }

    #[test]
    fn dominating_vertex_over_four_points() {
        // stage with at least four points: extend M0 a few times first
        let mut m = initial_stage(&a4()).unwrap();
        let t = ExtensionTask::new(dominating_type(&[0, 1]));
        m = extend_by_one_type(&m, &t).unwrap().0;
        assert_eq!(m.n(), 4);
        let c0 = vec![0, 1, 2, 3];
        let task = ExtensionTask::new(dominating_type(&c0));
        let (b, e) = extend_by_one_type(&m, &task).unwrap();
        let stab = m.action().base().pointwise_stabilizer_indices(&c0).len();
        assert_eq!(b.n() - m.n(), m.action().group().order() / stab);
        assert!(is_in_class_d(b.structure()));
        assert!(crate::structure::realizes(b.structure(), e, &task.link).unwrap());
        check_nice_four_sets(b.action()).unwrap();
    }

    #[test]
    fn transport_is_equivariant() {
        let m0 = initial_stage(&a4()).unwrap();
        let task = ExtensionTask::new(dominating_type(&[0]));
        let (b, e) = extend_by_one_type(&m0, &task).unwrap();
        let act = b.action().base();
        for g in 0..act.group().order() {
            for v in 0..m0.n() {
                assert_eq!(
                    b.structure().pair_state(e, v),
                    b.structure().pair_state(act.act(g, e), act.act(g, v))
                );
            }
        }
    }

    #[test]
    fn empty_base_task_rejected() {
        let m0 = initial_stage(&a4()).unwrap();
        let t = ExtensionTask::new(LinkType::empty(vec![]));
        assert!(matches!(extend_by_one_type(&m0, &t), Err(Error::Input(_))));
    }

    #[test]
    fn inconsistent_task_rejected() {
        let m0 = initial_stage(&a4()).unwrap();
        // M0 has no edge between its two points, so an isolated new point
        // over both would create an anticlique
        let t = ExtensionTask::new(LinkType::empty(vec![0, 1]));
        assert!(matches!(extend_by_one_type(&m0, &t), Err(Error::Input(_))));
    }

    #[test]
    fn small_ambient_refused() {
        let a = Structure::empty("pt", 1);
        assert!(matches!(build_universal_action(&a, 1, 1, usize::MAX), Err(Error::Input(_))));
    }

    #[test]
    fn budget_leaves_tasks_unrealized() {
        let b = build_universal_action(&a4(), 1, 1, 6).unwrap();
        assert!(!b.report.complete);
        assert!(!b.report.unrealized.is_empty());
        assert!(b.last().n() <= 6);
    }

    #[test]
    fn trivial_group_ambient() {
        let a = Structure::new(
            "tt4",
            4,
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            [[0, 1, 2, 3]],
        )
        .unwrap();
        let b = build_universal_action(&a, 1, 1, usize::MAX).unwrap();
        assert_eq!(b.report.group_order, 1);
        assert_eq!(b.report.stage_sizes, vec![1, 4]);
        let ext = verify_extension_property_within(b.last().structure(), 1, Some(1)).unwrap();
        assert!(ext.satisfied());
    }
}
