use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perms::{PermGroup, Permutation};

/// An action of a permutation group on an abstract finite point set.
///
/// The group acts abstractly: its elements are permutations of some other
/// set (typically the domain of a structure), while the points here are
/// opaque indices `0..m` with an optional label table. `table[g][v]` is the
/// image of point `v` under element index `g`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: Arc<PermGroup>,
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Builds an action from a full element table and checks the action
    /// axioms on every element/generator pair.
    pub fn from_table(group: Arc<PermGroup>, points: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::input("action table must have one row per group element"));
        }
        for row in &table {
            if row.len() != points {
                return Err(Error::input("action table row has wrong length"));
            }
            Permutation::new(row.clone())?;
        }
        let action = GroupAction {
            labels: (0..points).map(|v| v.to_string()).collect(),
            group,
            table,
        };
        action.check_homomorphism()?;
        Ok(action)
    }

    /// Builds an action from a point map `f(element index, point)`.
    pub fn from_fn(
        group: Arc<PermGroup>,
        points: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let table = (0..group.order())
            .map(|g| (0..points).map(|v| f(g, v)).collect())
            .collect();
        Self::from_table(group, points, table)
    }

    /// Builds an action from the images of the group's generators, extending
    /// along the word tree and rejecting maps that do not define a
    /// homomorphism.
    pub fn from_generator_maps(
        group: Arc<PermGroup>,
        points: usize,
        maps: &[Vec<usize>],
    ) -> Result<Self> {
        if maps.len() != group.generators().len() {
            return Err(Error::input(format!(
                "expected {} generator maps, got {}",
                group.generators().len(),
                maps.len()
            )));
        }
        let maps: Vec<Permutation> = maps
            .iter()
            .map(|m| {
                if m.len() != points {
                    Err(Error::input("generator map has wrong length"))
                } else {
                    Permutation::new(m.clone())
                }
            })
            .collect::<Result<_>>()?;
        let tree = group.word_tree();
        let mut table: Vec<Option<Permutation>> = vec![None; group.order()];
        table[0] = Some(Permutation::identity(points));
        // BFS order guarantees parents are filled first when walking by depth.
        let mut order: Vec<usize> = (0..group.order()).collect();
        let depth = |mut i: usize| {
            let mut d = 0;
            while let Some((_, p)) = tree[i] {
                i = p;
                d += 1;
            }
            d
        };
        order.sort_by_key(|&i| depth(i));
        for i in order {
            if let Some((gen, parent)) = tree[i] {
                let pm = table[parent].clone().expect("parent filled");
                table[i] = Some(maps[gen].compose(&pm));
            }
        }
        let table = table
            .into_iter()
            .map(|p| p.expect("filled").images().to_vec())
            .collect();
        Self::from_table(group, points, table)
    }

    /// The action of the group on its own degree.
    pub fn natural(group: Arc<PermGroup>) -> Self {
        let points = group.degree();
        let table = group.elements().iter().map(|e| e.images().to_vec()).collect();
        GroupAction {
            labels: (0..points).map(|v| v.to_string()).collect(),
            group,
            table,
        }
    }

    /// `act(gh, v) = act(g, act(h, v))` for every generator `g` and element
    /// `h`, plus identity acting trivially.
    fn check_homomorphism(&self) -> Result<()> {
        let g0 = &self.table[self.group.identity_index()];
        if g0.iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::input("identity does not act trivially"));
        }
        for gi in self.group.generator_indices() {
            for h in 0..self.group.order() {
                let gh = self.group.mul(gi, h);
                for v in 0..self.points() {
                    if self.table[gh][v] != self.table[gi][self.table[h][v]] {
                        return Err(Error::input(format!(
                            "action is not a homomorphism at generator {gi}, element {h}, point {v}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.points() {
            return Err(Error::input("label table length differs from point count"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn act(&self, g: usize, v: usize) -> usize {
        self.table[g][v]
    }

    pub fn row(&self, g: usize) -> &[usize] {
        &self.table[g]
    }

    /// Image of a sorted set, returned sorted.
    pub fn act_set(&self, g: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&v| self.table[g][v]).collect();
        out.sort_unstable();
        out
    }

    pub fn act_tuple<const K: usize>(&self, g: usize, t: [usize; K]) -> [usize; K] {
        t.map(|v| self.table[g][v])
    }

    pub fn is_faithful(&self) -> bool {
        (0..self.group.order())
            .filter(|&g| g != self.group.identity_index())
            .all(|g| self.table[g].iter().enumerate().any(|(i, &x)| i != x))
    }

    /// Element indices fixing `v`.
    pub fn point_stabilizer(&self, v: usize) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| self.table[g][v] == v)
            .collect()
    }

    pub fn pointwise_stabilizer_indices(&self, set: &[usize]) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| set.iter().all(|&v| self.table[g][v] == v))
            .collect()
    }

    pub fn setwise_stabilizer_indices(&self, set: &[usize]) -> Vec<usize> {
        let target: BTreeSet<usize> = set.iter().copied().collect();
        (0..self.group.order())
            .filter(|&g| set.iter().all(|&v| target.contains(&self.table[g][v])))
            .collect()
    }

    pub fn pointwise_stabilizer(&self, set: &[usize]) -> PermGroup {
        self.subgroup(self.pointwise_stabilizer_indices(set))
    }

    pub fn setwise_stabilizer(&self, set: &[usize]) -> PermGroup {
        self.subgroup(self.setwise_stabilizer_indices(set))
    }

    fn subgroup(&self, idx: Vec<usize>) -> PermGroup {
        let elems = idx.iter().map(|&i| self.group.element(i).clone()).collect();
        PermGroup::from_elements(self.group.degree(), elems)
            .expect("stabilisers are subgroups")
    }

    /// Point orbits, each sorted, in order of least element.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits(1)
            .into_iter()
            .map(|o| o.into_iter().map(|s| s[0]).collect())
            .collect()
    }

    /// Orbits of the induced action on `k`-subsets.
    ///
    /// Each orbit is a sorted list of sorted subsets; orbits are ordered by
    /// their least subset.
    pub fn orbits(&self, k: usize) -> Vec<Vec<Vec<usize>>> {
        let subsets = combinations(self.points(), k);
        let index: HashMap<&[usize], usize> = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let gens = self.group.generator_indices();
        let mut seen = vec![false; subsets.len()];
        let mut out = Vec::new();
        for start in 0..subsets.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let s = &subsets[orbit[i]];
                for &g in &gens {
                    let img = self.act_set(g, s);
                    let j = index[img.as_slice()];
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit.into_iter().map(|j| subsets[j].clone()).collect());
        }
        out
    }

    /// The action restricted to an invariant subset, renumbered in the
    /// order given.
    pub fn restrict(&self, subset: &[usize]) -> Result<GroupAction> {
        let pos: HashMap<usize, usize> = subset.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut table = Vec::with_capacity(self.group.order());
        for g in 0..self.group.order() {
            let row: Option<Vec<usize>> = subset
                .iter()
                .map(|&v| pos.get(&self.table[g][v]).copied())
                .collect();
            table.push(row.ok_or_else(|| Error::input("subset is not invariant"))?);
        }
        Ok(GroupAction {
            group: self.group.clone(),
            labels: subset.iter().map(|&v| self.labels[v].clone()).collect(),
            table,
        })
    }
}

/// The action of a group on its own elements by left multiplication.
pub fn left_regular_action(group: Arc<PermGroup>) -> GroupAction {
    let n = group.order();
    let table = (0..n)
        .map(|g| (0..n).map(|h| group.mul(g, h)).collect())
        .collect();
    let labels = group.elements().iter().map(|e| e.to_string()).collect();
    GroupAction {
        group,
        labels,
        table,
    }
}

/// All `k`-subsets of `0..n` as sorted vectors, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        while i > 0 && c[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(n: usize, gens: &[&[usize]]) -> Arc<PermGroup> {
        Arc::new(
            PermGroup::closure(n, gens.iter().map(|g| Permutation::new(g.to_vec()).unwrap()).collect())
                .unwrap(),
        )
    }

    #[test]
    fn combinations_counts() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn trivial_group_two_sets_are_singleton_orbits() {
        let a = GroupAction::natural(Arc::new(PermGroup::trivial(4)));
        let orbits = a.orbits(2);
        assert_eq!(orbits.len(), 6);
        assert!(orbits.iter().all(|o| o.len() == 1));
    }

    #[test]
    fn symmetric_three_pairs_single_orbit() {
        let a = GroupAction::natural(grp(3, &[&[1, 0, 2], &[1, 2, 0]]));
        let orbits = a.orbits(2);
        assert_eq!(orbits, vec![vec![vec![0, 1], vec![0, 2], vec![1, 2]]]);
    }

    #[test]
    fn double_transposition_point_orbits() {
        let a = GroupAction::natural(grp(4, &[&[1, 0, 3, 2]]));
        assert_eq!(a.point_orbits(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn empty_set_stabilisers_are_whole_group() {
        let a = GroupAction::natural(grp(4, &[&[1, 2, 3, 0]]));
        assert_eq!(a.pointwise_stabilizer(&[]).order(), 4);
        assert_eq!(a.setwise_stabilizer(&[]).order(), 4);
    }

    #[test]
    fn regular_action_is_free() {
        let c6 = grp(6, &[&[1, 2, 3, 4, 5, 0]]);
        let a = left_regular_action(c6);
        assert_eq!(a.pointwise_stabilizer(&[1]).order(), 1);
        assert!(a.is_faithful());
    }

    #[test]
    fn generator_maps_reject_non_homomorphism() {
        let c4 = grp(4, &[&[1, 2, 3, 0]]);
        // A transposition has order 2, so 4-cycle -> (0 1) is fine, but a
        // 3-cycle image is not a homomorphism.
        assert!(GroupAction::from_generator_maps(c4.clone(), 2, &[vec![1, 0]]).is_ok());
        assert!(GroupAction::from_generator_maps(c4, 3, &[vec![1, 2, 0]]).is_err());
    }

    #[test]
    fn restrict_requires_invariance() {
        let a = GroupAction::natural(grp(4, &[&[1, 0, 3, 2]]));
        assert!(a.restrict(&[2, 3]).is_ok());
        assert!(a.restrict(&[1, 2]).is_err());
    }
}
