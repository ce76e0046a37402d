mod common;

use std::collections::BTreeMap;

use omegamodal_core::bits::Subset;
use omegamodal_core::enumerate::{random_corpus, FormulaShape};
use omegamodal_core::semantics::{
    algebraic_to_model, check_duality, eval_algebraic, eval_neighborhood, frame_validates, model_to_algebraic,
    Assignment, Bounds,
};
use omegamodal_core::{parse, Formula, Modality};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{formula, prop_formula, random_frame, random_model};

fn assignment(vals: [usize; 3], domain: usize) -> Assignment {
    common::VARS.iter().zip(vals).map(|(v, d)| (v.to_string(), d % domain)).collect()
}

/// Truth-table oracle for propositional formulas at one world.
fn truth(f: &Formula, val: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Atom { pred, .. } => val[pred],
        Formula::And(a, b) => truth(a, val) && truth(b, val),
        Formula::Not(a) => !truth(a, val),
        _ => unreachable!("propositional"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn locality(f in formula(), seed in any::<u64>(), a in any::<[usize; 3]>(), b in any::<[usize; 3]>()) {
        let model = random_model(seed, 3, 2);
        let a1 = assignment(a, 2);
        // Agree with a1 on the free variables, differ arbitrarily elsewhere.
        let fv = f.free_vars();
        let mut a2 = assignment(b, 2);
        for v in &fv {
            a2.insert(v.clone(), a1[v]);
        }
        prop_assert_eq!(eval_neighborhood(&model, &a1, &f).unwrap(), eval_neighborhood(&model, &a2, &f).unwrap());
    }

    #[test]
    fn boolean_clauses_match_truth_tables(f in prop_formula(), seed in any::<u64>()) {
        let model = random_model(seed, 3, 1);
        let set = eval_neighborhood(&model, &Assignment::new(), &f).unwrap();
        for w in 0..3 {
            let val: BTreeMap<String, bool> = ["a", "b", "c"]
                .iter()
                .map(|p| (p.to_string(), model.holds(p, w, &[])))
                .collect();
            prop_assert_eq!(set.contains(w), truth(&f, &val));
        }
        let not = eval_neighborhood(&model, &Assignment::new(), &Formula::not(f.clone())).unwrap();
        prop_assert_eq!(not, set.complement(3));
    }

    #[test]
    fn forall_is_meet_over_domain(f in formula(), x in common::var(), seed in any::<u64>(), d in 1usize..=3, a in any::<[usize; 3]>()) {
        let model = random_model(seed, 2, d);
        let base = assignment(a, d);
        let all = eval_neighborhood(&model, &base, &Formula::forall(x.clone(), f.clone())).unwrap();
        let mut meet = Subset::full(2);
        for e in 0..d {
            let mut ax = base.clone();
            ax.insert(x.clone(), e);
            meet = meet.intersection(eval_neighborhood(&model, &ax, &f).unwrap());
        }
        prop_assert_eq!(all, meet);
    }

    #[test]
    fn translations_preserve_values(f in formula(), seed in any::<u64>(), a in any::<[usize; 3]>()) {
        let model = random_model(seed, 3, 2);
        let asg = assignment(a, 2);
        let alg_model = model_to_algebraic(&model);
        let v = eval_neighborhood(&model, &asg, &f).unwrap();
        prop_assert_eq!(eval_algebraic(&alg_model, &asg, &f).unwrap(), v);
        let back = algebraic_to_model(&alg_model, model.frame()).unwrap();
        prop_assert_eq!(back, model);
    }

    #[test]
    fn property_formulas_on_property_frames(seed in any::<u64>(), worlds in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = random_frame(&mut rng, worlds);
        let m = Modality::new("box");
        let b = Bounds::with_domain(1);
        let valid = |s: &str| frame_validates(&frame, &parse(s).unwrap(), &b).unwrap().is_valid();
        prop_assert_eq!(frame.check_mt(&m), valid("[](p & q) -> []p & []q"));
        prop_assert_eq!(frame.check_tp(&m), valid("[]T"));
        prop_assert_eq!(frame.check_cf(&m), valid("[]p & []q -> [](p & q)"));
    }
}

#[test]
fn duality_on_random_three_world_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let corpus = random_corpus(17, 30, &FormulaShape::default());
    let bounds = Bounds::with_domain(2);
    for _ in 0..20 {
        let frame = random_frame(&mut rng, 3);
        let report = check_duality(&frame, &corpus, &bounds).unwrap();
        assert!(report.all_agree(), "{:?}", report.disagreements().collect::<Vec<_>>());
    }
}

#[test]
fn bundled_frame_and_corpus_agree() {
    let report = check_duality(
        &omegamodal_core::bundled::frame3(),
        &omegamodal_core::bundled::corpus(),
        &Bounds::with_domain(2),
    )
    .unwrap();
    assert_eq!(report.entries.len(), 50);
    assert!(report.all_agree());
    // The frame is neither monotone nor topped, so the corpus is not all valid.
    assert!(report.entries.iter().any(|e| !e.frame_valid));
    assert!(report.entries.iter().any(|e| e.frame_valid));
}
