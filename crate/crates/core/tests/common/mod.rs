#![allow(dead_code)]

use std::collections::BTreeMap;

use omegamodal_core::bits::Subset;
use omegamodal_core::frames::{NeighborhoodFrame, Neighborhoods};
use omegamodal_core::semantics::{NeighborhoodModel, PredTable};
use omegamodal_core::{Formula, Modality};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn var() -> impl Strategy<Value = String> {
    prop::sample::select(&VARS[..]).prop_map(str::to_string)
}

pub fn modality() -> impl Strategy<Value = Modality> {
    prop::sample::select(&["box", "E"][..]).prop_map(Modality::new)
}

/// Formulas over `q` (0-ary), `P` (unary), `R` (binary) and the
/// modalities `box` and `E`.
pub fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bottom),
        Just(Formula::prop("q")),
        var().prop_map(|v| Formula::atom("P", &[&v])),
        (var(), var()).prop_map(|(a, b)| Formula::atom("R", &[&a, &b])),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (modality(), inner.clone()).prop_map(|(m, a)| Formula::boxed(m, a)),
            (modality(), inner.clone()).prop_map(|(m, a)| Formula::diamond(m, a)),
            (var(), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (var(), inner).prop_map(|(v, a)| Formula::exists(v, a)),
        ]
    })
}

/// Propositional formulas over `a`, `b`, `c`.
pub fn prop_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bottom),
        prop::sample::select(&["a", "b", "c"][..]).prop_map(Formula::prop),
    ];
    leaf.prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

/// A frame over `box` and `E` with arbitrary neighborhood families.
pub fn random_frame(rng: &mut impl Rng, worlds: usize) -> NeighborhoodFrame {
    let sets = 1u64 << worlds;
    let systems = ["box", "E"]
        .iter()
        .map(|m| {
            let per_world: Vec<Neighborhoods> = (0..worlds)
                .map(|_| (0..sets).filter(|_| rng.gen_bool(0.4)).map(Subset).collect())
                .collect();
            (Modality::new(*m), per_world)
        })
        .collect();
    NeighborhoodFrame::new(worlds, systems).unwrap()
}

/// A random model interpreting `q`, `P`, `R` (and `a`, `b`, `c`).
pub fn random_model(seed: u64, worlds: usize, domain: usize) -> NeighborhoodModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = random_frame(&mut rng, worlds);
    let mut interp = BTreeMap::new();
    for (p, arity) in [("q", 0u32), ("a", 0), ("b", 0), ("c", 0), ("P", 1), ("R", 2)] {
        let values = (0..domain.pow(arity))
            .map(|_| Subset(rng.gen_range(0..1u64 << worlds)))
            .collect();
        interp.insert(p.to_string(), PredTable { arity: arity as usize, values });
    }
    NeighborhoodModel::new(frame, domain, interp).unwrap()
}
