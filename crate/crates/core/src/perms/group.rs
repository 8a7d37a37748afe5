use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::perms::Permutation;

/// Default ceiling on the number of elements a closure may produce.
pub const DEFAULT_CLOSURE_CAP: usize = 20160;

/// Environment variable that overrides [`DEFAULT_CLOSURE_CAP`].
pub const CLOSURE_CAP_ENV: &str = "HOMOGEN_CLOSURE_CAP";

pub fn closure_cap() -> usize {
    std::env::var(CLOSURE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

/// A finite permutation group held as an explicit, sorted element list.
///
/// Element indices refer to positions in [`PermGroup::elements`]; the
/// identity is always index 0 because the identity image list sorts first.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    table: OnceLock<Vec<Vec<usize>>>,
    words: OnceLock<Vec<Option<(usize, usize)>>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            elements: self.elements.clone(),
            index: self.index.clone(),
            table: OnceLock::new(),
            words: OnceLock::new(),
        }
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Closure of `generators` under composition, with the configured cap.
    pub fn closure(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::closure_with_cap(degree, generators, closure_cap())
    }

    pub fn closure_with_cap(
        degree: usize,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::input(format!(
                "generator {g} has degree {}, expected {degree}",
                g.degree()
            )));
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in &generators {
                let x = g.compose(&e);
                if seen.insert(x.clone()) {
                    if seen.len() > cap {
                        return Err(Error::capacity(
                            "group closure",
                            seen.len() as u128,
                            cap as u128,
                        ));
                    }
                    queue.push_back(x);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::assemble(degree, generators, elements))
    }

    /// A group whose full element list is already known (for example a
    /// stabiliser filtered out of a larger group). The list is checked for
    /// closure; the generators are the elements themselves.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        let set: HashSet<&Permutation> = elements.iter().collect();
        if !set.contains(&Permutation::identity(degree)) {
            return Err(Error::input("element list lacks the identity"));
        }
        for a in &elements {
            if a.degree() != degree {
                return Err(Error::input("element degree mismatch"));
            }
            for b in &elements {
                if !set.contains(&a.compose(b)) {
                    return Err(Error::input(format!(
                        "element list not closed: {a} * {b} missing"
                    )));
                }
            }
        }
        let generators = elements.clone();
        Ok(Self::assemble(degree, generators, elements))
    }

    /// A group given by its full element list, with a small generating set
    /// picked greedily from the sorted elements. Closure of the list is
    /// confirmed by comparing it with the closure of the chosen generators.
    pub fn from_elements_reduced(degree: usize, mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.first() != Some(&Permutation::identity(degree)) {
            return Err(Error::input("element list lacks the identity"));
        }
        let mut gens: Vec<Permutation> = Vec::new();
        let mut covered: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
        for e in elements.iter() {
            if e.degree() != degree {
                return Err(Error::input("element degree mismatch"));
            }
            if covered.contains(e) {
                continue;
            }
            gens.push(e.clone());
            covered = Self::closure_with_cap(degree, gens.clone(), elements.len())
                .map_err(|_| Error::input("element list is not closed under composition"))?
                .elements
                .into_iter()
                .collect();
        }
        if covered.len() != elements.len() {
            return Err(Error::input("element list is not closed under composition"));
        }
        Ok(Self::assemble(degree, gens, elements))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::assemble(degree, Vec::new(), vec![Permutation::identity(degree)])
    }

    fn assemble(degree: usize, generators: Vec<Permutation>, elements: Vec<Permutation>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        PermGroup {
            degree,
            generators,
            elements,
            index,
            table: OnceLock::new(),
            words: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators
            .iter()
            .map(|g| self.index[g])
            .collect()
    }

    /// Multiplication table: `mul(i, j)` is the index of `e_i * e_j`.
    pub fn multiplication_table(&self) -> &[Vec<usize>] {
        self.table.get_or_init(|| {
            self.elements
                .iter()
                .map(|a| {
                    self.elements
                        .iter()
                        .map(|b| self.index[&a.compose(b)])
                        .collect()
                })
                .collect()
        })
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        if let Some(t) = self.table.get() {
            return t[i][j];
        }
        self.index[&self.elements[i].compose(&self.elements[j])]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.index[&self.elements[i].inverse()]
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.elements[i].order()
    }

    /// Breadth-first word tree over the generators: entry `i` is `None` for
    /// the identity, otherwise `(generator, parent)` with
    /// `e_i = gen * e_parent`.
    pub fn word_tree(&self) -> &[Option<(usize, usize)>] {
        self.words.get_or_init(|| {
            let mut tree: Vec<Option<Option<(usize, usize)>>> = vec![None; self.order()];
            tree[0] = Some(None);
            let mut queue = VecDeque::from([0usize]);
            while let Some(e) = queue.pop_front() {
                for (gi, g) in self.generators.iter().enumerate() {
                    let x = self.index[&g.compose(&self.elements[e])];
                    if tree[x].is_none() {
                        tree[x] = Some(Some((gi, e)));
                        queue.push_back(x);
                    }
                }
            }
            tree.into_iter()
                .map(|t| t.expect("generators do not generate the element list"))
                .collect()
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| {
            self.generators
                .iter()
                .all(|b| a.compose(b) == b.compose(a))
        })
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|i| self.element_order(i) == self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn trivial_closure() {
        let g = PermGroup::closure(3, vec![Permutation::identity(3)]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn cyclic_four() {
        let g = PermGroup::closure(4, vec![p(&[1, 2, 3, 0])]).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_cyclic());
        assert_eq!(g.identity_index(), 0);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn degree_mismatch_is_input_error() {
        let r = PermGroup::closure(3, vec![p(&[1, 0])]);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let s5 = vec![p(&[1, 0, 2, 3, 4]), p(&[1, 2, 3, 4, 0])];
        let r = PermGroup::closure_with_cap(5, s5.clone(), 100);
        assert!(matches!(r, Err(Error::Capacity { .. })));
        assert_eq!(PermGroup::closure_with_cap(5, s5, 120).unwrap().order(), 120);
    }

    #[test]
    fn word_tree_reconstructs_elements() {
        let g = PermGroup::closure(3, vec![p(&[1, 0, 2]), p(&[1, 2, 0])]).unwrap();
        let tree = g.word_tree();
        for (i, w) in tree.iter().enumerate() {
            if let Some((gen, parent)) = w {
                assert_eq!(&g.generators()[*gen].compose(g.element(*parent)), g.element(i));
            }
        }
    }

    #[test]
    fn reduced_generators_generate() {
        let full = PermGroup::closure(4, vec![p(&[1, 2, 3, 0]), p(&[0, 3, 2, 1])]).unwrap();
        let red = PermGroup::from_elements_reduced(4, full.elements().to_vec()).unwrap();
        assert_eq!(red.order(), 8);
        assert!(red.generators().len() <= 2);
    }
}
