//! Group-extensive embeddings, universality at finite scale, the 6-vertex
//! looped digraph whose age fails extensibility, and the 4-point
//! configuration that blocks extensibility inside the class.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builder::{all_link_types, one_point_extension};
use crate::classd::{canonical_semifinal, class_d_violation, strong_amalgam, AmalgamProblem};
use crate::error::{Error, Result};
use crate::perms::{closure_cap, combinations, PermGroup, Permutation};
use crate::structure::{
    are_isomorphic, automorphisms, automorphisms_extending, find_embeddings, Embedding, Flags, Structure,
};

/// The looped digraph on `a, a', b0, b1, b2, b3` (vertices `0..6`).
pub fn remark_structure() -> Structure {
    let (a, a2) = (0, 1);
    let b = |i: usize| 2 + i % 4;
    let mut r = vec![(a, b(0)), (a, b(2)), (a2, b(1)), (a2, b(3)), (a, a), (a2, a2)];
    r.extend((0..4).map(|i| (b(i), b(i + 1))));
    let flags = Flags {
        allow_loops: true,
        undirected: false,
    };
    Structure::with_flags("B", 6, flags, r, []).expect("fixed structure")
}

/// The generator `a <-> a'`, `b_i -> b_{i+1}` of `Aut(B)`.
pub fn remark_generator() -> Permutation {
    Permutation::new(vec![1, 0, 3, 4, 5, 2]).expect("fixed permutation")
}

/// An injective homomorphism between finite permutation groups, by element
/// index.
#[derive(Debug, Clone)]
pub struct GroupEmbedding {
    pub source: PermGroup,
    pub target: PermGroup,
    pub map: Vec<usize>,
}

impl GroupEmbedding {
    /// Injectivity and multiplicativity over the whole table; when `on` is
    /// given, also that each image restricts to its source on those
    /// vertices (source element `g` acts on `on[i] -> on[g(i)]`).
    pub fn replay(&self, on: Option<&[usize]>) -> Result<()> {
        let n = self.source.order();
        if self.map.len() != n {
            return Err(Error::integrity("embedding map has the wrong length"));
        }
        let images: BTreeSet<usize> = self.map.iter().copied().collect();
        if images.len() != n {
            return Err(Error::integrity("embedding is not injective"));
        }
        for x in 0..n {
            for y in 0..n {
                if self.map[self.source.mul(x, y)] != self.target.mul(self.map[x], self.map[y]) {
                    return Err(Error::integrity("embedding is not a homomorphism"));
                }
            }
        }
        if let Some(verts) = on {
            for (x, &y) in self.map.iter().enumerate() {
                let g = self.source.element(x);
                let h = self.target.element(y);
                if (0..verts.len()).any(|i| h.apply(verts[i]) != verts[g.apply(i)]) {
                    return Err(Error::integrity(format!("image of {g} does not extend it")));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.element(x).to_string(), self.target.element(y).to_string()))
            .collect()
    }
}

/// Element map from generator images closed along the source word tree,
/// or `None` if it fails to be an injective homomorphism.
fn close_generator_images(source: &PermGroup, target: &PermGroup, gen_images: &[usize]) -> Option<Vec<usize>> {
    let tree = source.word_tree();
    let mut map: Vec<Option<usize>> = vec![None; source.order()];
    map[source.identity_index()] = Some(target.identity_index());
    fn resolve(
        i: usize,
        tree: &[Option<(usize, usize)>],
        gen_images: &[usize],
        target: &PermGroup,
        map: &mut Vec<Option<usize>>,
    ) -> usize {
        if let Some(x) = map[i] {
            return x;
        }
        let (gen, parent) = tree[i].expect("non-identity has a word");
        let p = resolve(parent, tree, gen_images, target, map);
        let x = target.mul(gen_images[gen], p);
        map[i] = Some(x);
        x
    }
    for i in 0..source.order() {
        resolve(i, tree, gen_images, target, &mut map);
    }
    let map: Vec<usize> = map.into_iter().map(|x| x.expect("resolved")).collect();
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    if distinct.len() != map.len() {
        return None;
    }
    for x in 0..source.order() {
        for y in 0..source.order() {
            if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    Some(map)
}

/// Tries every tuple of generator images drawn from `candidates`.
fn search_embedding(
    source: &PermGroup,
    target: &PermGroup,
    candidates: &[Vec<usize>],
) -> (Option<Vec<usize>>, usize) {
    let mut tried = 0;
    if candidates.iter().any(|c| c.is_empty()) {
        return (None, 0);
    }
    let mut choice = vec![0usize; candidates.len()];
    loop {
        tried += 1;
        let imgs: Vec<usize> = choice.iter().zip(candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = close_generator_images(source, target, &imgs) {
            return (Some(map), tried);
        }
        let mut i = choice.len();
        loop {
            if i == 0 {
                return (None, tried);
            }
            i -= 1;
            if choice[i] + 1 < candidates[i].len() {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
        }
    }
}

fn automorphism_group_capped(m: &Structure) -> Result<PermGroup> {
    let auts = automorphisms(m);
    let cap = closure_cap();
    if auts.len() > cap {
        return Err(Error::capacity("automorphism group", auts.len() as u128, cap as u128));
    }
    PermGroup::from_elements_reduced(m.n(), auts)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCandidates {
    pub generator: String,
    pub extensions: Vec<String>,
    pub extension_orders: Vec<usize>,
}

/// Why no group-extensive embedding exists.
#[derive(Debug, Clone, Serialize)]
pub struct Refutation {
    pub image: Vec<usize>,
    pub generators: Vec<GeneratorCandidates>,
    pub tuples_tried: usize,
}

#[derive(Debug, Clone)]
pub enum Extensivity {
    Extensive(GroupEmbedding),
    NotExtensive(Refutation),
}

impl Extensivity {
    pub fn holds(&self) -> bool {
        matches!(self, Extensivity::Extensive(_))
    }
}

/// Decides whether `Aut(f(A))` embeds into `Aut(M)` with every image
/// extending its source, by trying all extensions of each generator.
pub fn is_group_extensive(f: &Embedding, m: &Structure) -> Result<Extensivity> {
    let target = automorphism_group_capped(m)?;
    is_group_extensive_in(f, m, &target)
}

fn is_group_extensive_in(f: &Embedding, m: &Structure, target: &PermGroup) -> Result<Extensivity> {
    let image = f.image();
    if image.last().is_some_and(|&x| x >= m.n()) {
        return Err(Error::input("embedding leaves the target"));
    }
    let (sub, verts) = m.induced_substructure(&image)?;
    let source = PermGroup::from_elements_reduced(sub.n(), automorphisms(&sub))?;
    let candidates: Vec<Vec<usize>> = source
        .generators()
        .iter()
        .map(|g| {
            (0..target.order())
                .filter(|&h| {
                    let h = target.element(h);
                    (0..verts.len()).all(|i| h.apply(verts[i]) == verts[g.apply(i)])
                })
                .collect()
        })
        .collect();
    let (found, tried) = search_embedding(&source, target, &candidates);
    match found {
        Some(map) => {
            let emb = GroupEmbedding {
                source,
                target: target.clone(),
                map,
            };
            emb.replay(Some(&verts))?;
            Ok(Extensivity::Extensive(emb))
        }
        None => Ok(Extensivity::NotExtensive(Refutation {
            image: verts.clone(),
            generators: source
                .generators()
                .iter()
                .zip(&candidates)
                .map(|(g, cs)| GeneratorCandidates {
                    generator: relabel(g, &verts),
                    extensions: cs.iter().map(|&h| target.element(h).to_string()).collect(),
                    extension_orders: cs.iter().map(|&h| target.element_order(h)).collect(),
                })
                .collect(),
            tuples_tried: tried,
        })),
    }
}

/// A permutation of `0..verts.len()` written on the vertices it stands for.
fn relabel(g: &Permutation, verts: &[usize]) -> String {
    let mut images: Vec<usize> = (0..verts.iter().max().map_or(0, |&m| m + 1)).collect();
    for (i, &v) in verts.iter().enumerate() {
        images[v] = verts[g.apply(i)];
    }
    Permutation::new(images).expect("relabelled permutation").to_string()
}

/// Default bound on the size of structures whose age is classified.
pub const AGE_SIZE_CAP: usize = 8;

/// An isomorphism class of nonempty induced substructures, represented by
/// the first vertex set (in size, then lexicographic order) inducing it.
#[derive(Debug, Clone)]
pub struct AgeClass {
    pub vertices: Vec<usize>,
    pub structure: Structure,
}

pub fn age_classes(m: &Structure, cap: usize) -> Result<Vec<AgeClass>> {
    if m.n() > cap {
        return Err(Error::capacity("age classification size", m.n() as u128, cap as u128));
    }
    let mut classes: Vec<AgeClass> = Vec::new();
    for k in 1..=m.n() {
        for subset in combinations(m.n(), k) {
            let (sub, _) = m.induced_substructure(&subset)?;
            if !classes.iter().any(|c| are_isomorphic(&c.structure, &sub)) {
                classes.push(AgeClass {
                    vertices: subset,
                    structure: sub,
                });
            }
        }
    }
    Ok(classes)
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingVerdict {
    pub map: Vec<usize>,
    pub extensive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgeClassVerdict {
    pub vertices: Vec<usize>,
    pub size: usize,
    pub aut_order: usize,
    pub embeddings: Vec<EmbeddingVerdict>,
    pub some_extensive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgeExtensibilityReport {
    pub structure: String,
    pub classes: Vec<AgeClassVerdict>,
    /// Indices into `classes` with no extensive embedding.
    pub failing: Vec<usize>,
    pub extensible: bool,
}

/// For every class of the age and every embedding of it, whether the
/// embedding is group-extensive.
pub fn check_age_group_extensibility(m: &Structure) -> Result<AgeExtensibilityReport> {
    check_age_group_extensibility_capped(m, AGE_SIZE_CAP)
}

pub fn check_age_group_extensibility_capped(m: &Structure, cap: usize) -> Result<AgeExtensibilityReport> {
    let target = automorphism_group_capped(m)?;
    let mut classes = Vec::new();
    let mut failing = Vec::new();
    for (i, class) in age_classes(m, cap)?.into_iter().enumerate() {
        let mut embeddings = Vec::new();
        for f in find_embeddings(&class.structure, m) {
            let extensive = is_group_extensive_in(&f, m, &target)?.holds();
            embeddings.push(EmbeddingVerdict { map: f.map, extensive });
        }
        let some_extensive = embeddings.iter().any(|e| e.extensive);
        if !some_extensive {
            failing.push(i);
        }
        classes.push(AgeClassVerdict {
            vertices: class.vertices,
            size: class.structure.n(),
            aut_order: automorphisms(&class.structure).len(),
            embeddings,
            some_extensive,
        });
    }
    Ok(AgeExtensibilityReport {
        structure: m.name().to_string(),
        extensible: failing.is_empty(),
        classes,
        failing,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UniversalityClass {
    pub vertices: Vec<usize>,
    pub aut_order: usize,
    pub embeds: bool,
    /// Images of the class's automorphisms, when an embedding exists.
    pub witness: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniversalityReport {
    pub structure: String,
    pub aut_order: usize,
    pub classes: Vec<UniversalityClass>,
    pub universal: bool,
}

/// For every class of the age, whether its automorphism group embeds as an
/// abstract group into `Aut(M)`.
pub fn universality_of_finite(m: &Structure) -> Result<UniversalityReport> {
    let target = automorphism_group_capped(m)?;
    let all: Vec<usize> = (0..target.order()).collect();
    let mut classes = Vec::new();
    for class in age_classes(m, AGE_SIZE_CAP)? {
        let source = PermGroup::from_elements_reduced(class.structure.n(), automorphisms(&class.structure))?;
        let candidates = vec![all.clone(); source.generators().len()];
        let (found, _) = search_embedding(&source, &target, &candidates);
        let witness = found.map(|map| {
            GroupEmbedding {
                source: source.clone(),
                target: target.clone(),
                map,
            }
            .describe()
        });
        classes.push(UniversalityClass {
            vertices: class.vertices,
            aut_order: source.order(),
            embeds: witness.is_some(),
            witness,
        });
    }
    Ok(UniversalityReport {
        structure: m.name().to_string(),
        aut_order: target.order(),
        universal: classes.iter().all(|c| c.embeds),
        classes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RemarkReport {
    pub vertices: usize,
    pub atoms: usize,
    pub ultrahomogeneous: bool,
    pub aut_order: usize,
    pub aut_cyclic: bool,
    pub generator_is_automorphism: bool,
    pub universal: bool,
    pub age_extensible: bool,
    /// Vertex sets of the age classes with no extensive embedding.
    pub failing_classes: Vec<Vec<usize>>,
    /// Embeddings of the failing classes, by image list.
    pub failing_embeddings: Vec<Vec<Vec<usize>>>,
    /// Orders of the automorphisms extending the swap of `a, a'`.
    pub swap_extension_orders: Vec<usize>,
}

impl RemarkReport {
    /// Every statement about the structure holds as claimed.
    pub fn confirms(&self) -> bool {
        self.vertices == 6
            && self.atoms == 10
            && self.ultrahomogeneous
            && self.aut_order == 4
            && self.aut_cyclic
            && self.generator_is_automorphism
            && self.universal
            && !self.age_extensible
            && self.failing_classes == vec![vec![0, 1]]
            && self.failing_embeddings == vec![vec![vec![0, 1], vec![1, 0]]]
            && !self.swap_extension_orders.is_empty()
            && self.swap_extension_orders.iter().all(|&o| o == 4)
    }
}

/// Full verification of the looped 6-vertex digraph.
pub fn remark_verification() -> Result<RemarkReport> {
    let b = remark_structure();
    let aut = automorphism_group_capped(&b)?;
    let age = check_age_group_extensibility(&b)?;
    let uni = universality_of_finite(&b)?;
    let swap_extension_orders = automorphisms_extending(&b, &[(0, 1), (1, 0)])
        .iter()
        .map(|p| p.order())
        .collect();
    Ok(RemarkReport {
        vertices: b.n(),
        atoms: b.r().len(),
        ultrahomogeneous: crate::structure::is_ultrahomogeneous(&b).holds,
        aut_order: aut.order(),
        aut_cyclic: aut.is_cyclic(),
        generator_is_automorphism: b.is_automorphism(&remark_generator()),
        universal: uni.universal,
        age_extensible: age.extensible,
        failing_classes: age.failing.iter().map(|&i| age.classes[i].vertices.clone()).collect(),
        failing_embeddings: age
            .failing
            .iter()
            .map(|&i| age.classes[i].embeddings.iter().map(|e| e.map.clone()).collect())
            .collect(),
        swap_extension_orders,
    })
}

/// The four-point configuration on `f(a), f(b), f(c), v`.
#[derive(Debug, Clone)]
pub struct ObstructionConfig {
    pub structure: Structure,
    pub fa: usize,
    pub fb: usize,
    pub fc: usize,
    pub v: usize,
}

pub fn obstruction_config() -> ObstructionConfig {
    let (fa, fb, fc, v) = (0, 1, 2, 3);
    let structure = Structure::new(
        "obstruction",
        4,
        [(fa, fb), (fa, fc), (v, fb), (fc, v)],
        canonical_semifinal([0, 1, 2, 3]),
    )
    .expect("fixed structure");
    ObstructionConfig { structure, fa, fb, fc, v }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionVerdict {
    pub structure: String,
    pub copies_checked: usize,
    pub automorphisms: usize,
    /// Automorphisms fixing `f(a)` and swapping `f(b)`, `f(c)`, over all
    /// copies. None are involutions, or the check would have failed.
    pub swap_extensions: usize,
    pub derivation: Vec<String>,
}

impl ObstructionVerdict {
    pub fn no_swap_extension(&self) -> bool {
        self.swap_extensions == 0
    }
}

/// For every copy of the configuration in `m`, searches the automorphisms
/// fixing `f(a)` and swapping `f(b)`, `f(c)`. An involution among them is
/// an integrity failure; other extensions are counted.
pub fn verify_obstruction(m: &Structure) -> Result<ObstructionVerdict> {
    if let Some(v) = class_d_violation(m) {
        return Err(Error::input(format!("{} is not in the class: {v:?}", m.name())));
    }
    let cfg = obstruction_config();
    let copies = find_embeddings(&cfg.structure, m);
    if copies.is_empty() {
        return Err(Error::input(format!("{} contains no copy of the configuration", m.name())));
    }
    let auts = automorphisms(m);
    let mut derivation = Vec::new();
    let mut swap_extensions = 0;
    for e in &copies {
        let (fa, fb, fc, v) = (e.map[cfg.fa], e.map[cfg.fb], e.map[cfg.fc], e.map[cfg.v]);
        let swaps = automorphisms_extending(m, &[(fa, fa), (fb, fc), (fc, fb)]);
        if let Some(tau) = swaps.iter().find(|t| t.order() == 2) {
            return Err(Error::integrity(format!(
                "involution {tau} fixes {fa} and swaps {fb}, {fc} in {}",
                m.name()
            )));
        }
        swap_extensions += swaps.len();
        derivation.push(format!(
            "copy f(a)={fa} f(b)={fb} f(c)={fc} v={v}: an involution tau extending the swap sends (v,f(b)) to (tau v,f(c)) and (f(c),v) to (f(b),tau v), so tau v != v; it swaps v and tau v, so that pair has no edge, and neither pair at f(a) does, making {{f(a), v, tau v}} an anticlique; search found {} extensions of the swap, none an involution",
            swaps.len()
        ));
    }
    Ok(ObstructionVerdict {
        structure: m.name().to_string(),
        copies_checked: copies.len(),
        automorphisms: auts.len(),
        swap_extensions,
        derivation,
    })
}

/// A class member on `size` vertices containing the configuration, grown by
/// strong amalgamation with random one-point extensions over subsets of at
/// most three vertices.
pub fn random_obstruction_host(size: usize, seed: u64) -> Result<Structure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = obstruction_config().structure;
    while m.n() < size {
        let k = rng.gen_range(0..=m.n().min(3));
        let mut pool: Vec<usize> = (0..m.n()).collect();
        let mut base = Vec::with_capacity(k);
        for _ in 0..k {
            base.push(pool.swap_remove(rng.gen_range(0..pool.len())));
        }
        base.sort_unstable();
        let types = all_link_types(&m, &base)?;
        let link = &types[rng.gen_range(0..types.len())];
        let c = one_point_extension(&m, link)?;
        let problem = AmalgamProblem::over_substructure(m.clone(), &base, c, (0..k).collect())?;
        m = strong_amalgam(&problem)?.d;
    }
    Ok(m.renamed(format!("host_{size}_{seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classd::is_in_class_d;
    use crate::structure::{automorphism_group, is_ultrahomogeneous};

    #[test]
    fn remark_counts() {
        let b = remark_structure();
        assert_eq!(b.n(), 6);
        assert_eq!(b.r().len(), 10);
        let g = automorphism_group(&b);
        assert_eq!(g.order(), 4);
        assert!(g.is_cyclic());
        assert!(g.contains(&remark_generator()));
        assert!(is_ultrahomogeneous(&b).holds);
    }

    #[test]
    fn remark_report_confirms() {
        let r = remark_verification().unwrap();
        assert!(r.confirms(), "{r:?}");
    }

    #[test]
    fn swap_of_loops_is_not_extensive() {
        let b = remark_structure();
        let f = Embedding::identity(2);
        match is_group_extensive(&f, &b).unwrap() {
            Extensivity::NotExtensive(r) => {
                assert!(r.generators.iter().all(|g| g.extension_orders.iter().all(|&o| o == 4)));
            }
            Extensivity::Extensive(_) => panic!("swap must not extend"),
        }
    }

    #[test]
    fn trivial_automorphisms_are_extensive() {
        let b = remark_structure();
        // a and b0: edge a -> b0, rigid
        let f = Embedding { map: vec![0, 2] };
        assert!(is_group_extensive(&f, &b).unwrap().holds());
    }

    #[test]
    fn config_is_in_class_and_not_extensive() {
        let cfg = obstruction_config();
        assert!(is_in_class_d(&cfg.structure));
        let f = Embedding { map: vec![0, 1, 2] };
        assert!(!is_group_extensive(&f, &cfg.structure).unwrap().holds());
        let v = verify_obstruction(&cfg.structure).unwrap();
        assert_eq!(v.copies_checked, 1);
        assert!(v.no_swap_extension());
    }

    #[test]
    fn missing_config_is_input_error() {
        let m = Structure::new("tt", 3, [(0, 1), (0, 2), (1, 2)], []).unwrap();
        assert!(matches!(verify_obstruction(&m), Err(Error::Input(_))));
    }

    #[test]
    fn directed_three_cycle_is_universal() {
        let c3 = Structure::new("c3", 3, [(0, 1), (1, 2), (2, 0)], []).unwrap();
        let u = universality_of_finite(&c3).unwrap();
        assert!(u.universal);
        assert_eq!(u.aut_order, 3);
    }

    #[test]
    fn rigid_target_with_symmetric_age_not_universal() {
        // rigid, but the non-adjacent pair {1,3} has a swap
        let m = Structure::new("rig", 4, [(0, 1), (0, 2), (1, 2), (2, 3), (0, 3)], []).unwrap();
        assert_eq!(automorphisms(&m).len(), 1);
        assert!(!universality_of_finite(&m).unwrap().universal);
    }

    #[test]
    fn random_hosts_contain_config() {
        for seed in 0..5 {
            let m = random_obstruction_host(7, seed).unwrap();
            assert_eq!(m.n(), 7);
            assert!(is_in_class_d(&m));
            assert!(verify_obstruction(&m).unwrap().no_swap_extension());
        }
    }
}
