//! Exhaustive small-frame enumeration and seeded random generators for
//! algebras, meet-families, neighborhood systems and formulas.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{complex_algebra, MeetFamily, ModalAlgebra, QFilterFrame};
use crate::bits::{Element, Subset};
use crate::frames::{
    relation_to_frame, transitive_closure_union, AccessibilityRelation, NeighborhoodFrame, Neighborhoods, Relation,
};
use crate::syntax::{Formula, Modality};

/// Every single-modality frame on `worlds` worlds: each world takes any
/// family of world-sets, `2^(2^n)` choices per world.
///
/// Panics for `worlds > 2`; three worlds already give 2^24 frames.
pub fn all_frames(worlds: usize, m: &Modality) -> impl Iterator<Item = NeighborhoodFrame> + '_ {
    assert!((1..=2).contains(&worlds), "exhaustive frame enumeration is limited to 2 worlds");
    let families = 1u64 << (1 << worlds);
    let total = families.pow(worlds as u32);
    (0..total).map(move |code| {
        let per_world = (0..worlds)
            .map(|c| {
                let fam = code / families.pow(c as u32) % families;
                Subset(fam).iter().map(|i| Subset(i as u64)).collect::<Neighborhoods>()
            })
            .collect();
        NeighborhoodFrame::new(worlds, BTreeMap::from([(m.clone(), per_world)])).expect("in range")
    })
}

/// Every relation on `worlds` worlds, in edge-bit order.
pub fn all_relations(worlds: usize) -> impl Iterator<Item = Relation> {
    assert!((1..=4).contains(&worlds), "relation enumeration is limited to 4 worlds");
    (0..1u64 << (worlds * worlds)).map(move |code| {
        Relation::from_successors(
            (0..worlds)
                .map(|a| Subset(code >> (a * worlds) & ((1 << worlds) - 1)))
                .collect(),
        )
    })
}

/// Transitive irreflexive relations, which on finite sets are exactly
/// the transitive conversely well-founded ones.
pub fn strict_partial_orders(worlds: usize) -> Vec<Relation> {
    all_relations(worlds)
        .filter(|r| r.is_transitive() && (0..worlds).all(|c| !r.contains(c, c)))
        .collect()
}

/// Kripke frames of all strict partial orders on `1..=max_worlds` worlds.
pub fn gl_kripke_frames(max_worlds: usize, m: &Modality) -> Vec<NeighborhoodFrame> {
    (1..=max_worlds)
        .flat_map(strict_partial_orders)
        .map(|r| relation_to_frame(&AccessibilityRelation::new(r.worlds(), BTreeMap::from([(m.clone(), r)])).unwrap()))
        .collect()
}

/// Bi-modal Kripke frames with any `R_E` on `1..=max_worlds` worlds and
/// `R_C = ⋃ₙ R_Eⁿ`, the union starting at `n = 0` when `include_identity`.
pub fn ck_bi_frames(max_worlds: usize, e: &Modality, c: &Modality, include_identity: bool) -> Vec<NeighborhoodFrame> {
    (1..=max_worlds)
        .flat_map(all_relations)
        .map(|re| {
            let rc = transitive_closure_union(&re, include_identity);
            let rel = AccessibilityRelation::new(re.worlds(), BTreeMap::from([(e.clone(), re), (c.clone(), rc)]))
                .expect("same world count");
            relation_to_frame(&rel)
        })
        .collect()
}

/// How a random algebra is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraFlavor {
    /// Uniform box tables.
    Table,
    /// Complex algebra of a random monotone frame.
    MonotoneFrame,
    /// Complex algebra of a random Kripke frame.
    Kripke,
    /// Uniform tables with `□1 = 1`.
    Topped,
}

impl AlgebraFlavor {
    pub const ALL: [AlgebraFlavor; 4] = [
        AlgebraFlavor::Table,
        AlgebraFlavor::MonotoneFrame,
        AlgebraFlavor::Kripke,
        AlgebraFlavor::Topped,
    ];
}

fn up_closure(gens: &[Subset], worlds: usize) -> Neighborhoods {
    Subset::all(worlds).filter(|x| gens.iter().any(|g| g.is_subset(*x))).collect()
}

pub fn random_algebra(rng: &mut impl Rng, atoms: usize, m: &Modality, flavor: AlgebraFlavor) -> ModalAlgebra {
    let mods = std::slice::from_ref(m);
    let top = Subset::full(atoms);
    match flavor {
        AlgebraFlavor::Table => ModalAlgebra::random(rng, atoms, mods).expect("atom count in range"),
        AlgebraFlavor::Topped => {
            let size = 1u64 << atoms;
            ModalAlgebra::from_fn(atoms, mods, |_, x| if x == top { top } else { Subset(rng.gen_range(0..size)) })
                .expect("atom count in range")
        }
        AlgebraFlavor::MonotoneFrame => {
            let per_world = (0..atoms)
                .map(|_| {
                    let gens: Vec<Subset> = (0..rng.gen_range(0..=2))
                        .map(|_| Subset(rng.gen_range(0..1u64 << atoms)))
                        .collect();
                    up_closure(&gens, atoms)
                })
                .collect();
            complex_algebra(&NeighborhoodFrame::new(atoms, BTreeMap::from([(m.clone(), per_world)])).unwrap())
        }
        AlgebraFlavor::Kripke => {
            let succ = (0..atoms).map(|_| Subset(rng.gen_range(0..1u64 << atoms))).collect();
            let rel = AccessibilityRelation::new(atoms, BTreeMap::from([(m.clone(), Relation::from_successors(succ))]))
                .unwrap();
            complex_algebra(&relation_to_frame(&rel))
        }
    }
}

/// `count` algebras with `1..=max_atoms` atoms, cycling through the
/// flavors, reproducible from `seed`.
pub fn random_algebras(seed: u64, count: usize, max_atoms: usize, m: &Modality) -> Vec<ModalAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let atoms = rng.gen_range(1..=max_atoms);
            random_algebra(&mut rng, atoms, m, AlgebraFlavor::ALL[i % AlgebraFlavor::ALL.len()])
        })
        .collect()
}

/// Up to `families` random nonempty subsets of the carrier.
pub fn random_meet_family(rng: &mut impl Rng, alg: &ModalAlgebra, families: usize) -> MeetFamily {
    let elements: Vec<Element> = alg.elements().collect();
    MeetFamily(
        (0..families)
            .map(|_| {
                let k = rng.gen_range(1..=elements.len().min(4));
                elements.choose_multiple(rng, k).copied().collect::<BTreeSet<_>>()
            })
            .collect(),
    )
}

/// A random neighborhood system `N` on the Q-filters satisfying the
/// frame condition, or `None` when no such system exists.
///
/// Each `N(F)` is a random selection of sets meeting every `f(y)` with
/// `◇y ∈ F`, repaired so that each `□x ∈ F` has a member inside `f(x)`.
pub fn random_dfrm_frame(rng: &mut impl Rng, alg: &ModalAlgebra, base: &QFilterFrame) -> Option<QFilterFrame> {
    let q = base.frame().worlds();
    let mut systems = BTreeMap::new();
    for m in alg.modalities() {
        let mut per_world = Vec::with_capacity(q);
        for f in base.filters() {
            let diamonds: Vec<Subset> = alg
                .elements()
                .filter(|&y| f.contains(alg.diamond(m, y)))
                .map(|y| base.extension(y))
                .collect();
            let allowed: Vec<Subset> = Subset::all(q)
                .filter(|x| diamonds.iter().all(|d| !x.intersection(*d).is_empty()))
                .collect();
            let mut ns: Neighborhoods = allowed.iter().filter(|_| rng.gen_bool(0.3)).copied().collect();
            for x in alg.elements().filter(|&x| f.contains(alg.box_of(m, x))) {
                let fx = base.extension(x);
                if !ns.iter().any(|n| n.is_subset(fx)) {
                    let inside: Vec<Subset> = allowed.iter().filter(|n| n.is_subset(fx)).copied().collect();
                    ns.insert(*inside.choose(rng)?);
                }
            }
            per_world.push(ns);
        }
        systems.insert(m.clone(), per_world);
    }
    base.with_systems(systems).ok()
}

/// Shape of randomly generated formulas.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    /// Predicate symbols with their arities.
    pub predicates: Vec<(String, usize)>,
    pub modalities: Vec<Modality>,
    pub variables: Vec<String>,
    /// Bound on modal and quantifier nesting, closing quantifiers included.
    pub max_depth: usize,
}

impl Default for FormulaShape {
    fn default() -> Self {
        FormulaShape {
            predicates: vec![("P".into(), 1), ("q".into(), 0)],
            modalities: vec![Modality::default_box()],
            variables: vec!["x".into(), "y".into()],
            max_depth: 3,
        }
    }
}

fn gen(rng: &mut impl Rng, shape: &FormulaShape, depth: usize, size: usize) -> Formula {
    let leaf = size == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..8) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => {
                let (p, arity) = shape.predicates.choose(rng).expect("some predicate");
                let args: Vec<&str> = (0..*arity)
                    .map(|_| shape.variables.choose(rng).expect("some variable").as_str())
                    .collect();
                Formula::atom(p.clone(), &args)
            }
        };
    }
    let k = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..6) };
    let sub = |rng: &mut _, d| gen(rng, shape, d, size - 1);
    match k {
        0 => Formula::not(sub(rng, depth)),
        1 => Formula::and(sub(rng, depth), sub(rng, depth)),
        2 => Formula::implies(sub(rng, depth), sub(rng, depth)),
        3 | 4 => Formula::boxed(shape.modalities.choose(rng).expect("some modality").clone(), sub(rng, depth - 1)),
        _ => {
            let v = shape.variables.choose(rng).expect("some variable").clone();
            let body = sub(rng, depth - 1);
            if rng.gen_bool(0.5) {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

/// A random closed formula: free variables are closed off by quantifiers,
/// and draws exceeding the depth bound are retried.
pub fn random_formula(rng: &mut impl Rng, shape: &FormulaShape) -> Formula {
    loop {
        let body = gen(rng, shape, shape.max_depth, 5);
        let f = body.free_vars().into_iter().fold(body, |acc, v| {
            if rng.gen_bool(0.5) {
                Formula::forall(v, acc)
            } else {
                Formula::exists(v, acc)
            }
        });
        if f.depth() <= shape.max_depth {
            return f;
        }
    }
}

/// `count` distinct random closed formulas, reproducible from `seed`.
pub fn random_corpus(seed: u64, count: usize, shape: &FormulaShape) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_formula(&mut rng, shape);
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}
