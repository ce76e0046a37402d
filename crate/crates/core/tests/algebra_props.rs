mod common;

use std::collections::BTreeMap;

use omegamodal_core::algebra::{
    complex_algebra, embedding, enumerate_prime_filters, is_qfilter, qfilter_frame, verify_embedding, MeetFamily,
    ModalAlgebra,
};
use omegamodal_core::bits::Subset;
use omegamodal_core::enumerate::{random_algebra, random_meet_family, AlgebraFlavor};
use omegamodal_core::frames::{relation_to_frame, AccessibilityRelation, Relation};
use omegamodal_core::Modality;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_frame;

fn bx() -> Modality {
    Modality::default_box()
}

fn relation(worlds: usize, succ: &[u64]) -> Relation {
    Relation::from_successors(succ.iter().take(worlds).map(|s| Subset(s & ((1 << worlds) - 1))).collect())
}

fn flavor() -> impl Strategy<Value = AlgebraFlavor> {
    prop::sample::select(&AlgebraFlavor::ALL[..])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kripke_frames_are_normal_and_round_trip(worlds in 1usize..=4, succ in prop::array::uniform4(any::<u64>())) {
        let r = relation(worlds, &succ);
        let frame = relation_to_frame(&AccessibilityRelation::mono(r.clone()));
        let m = bx();
        prop_assert!(frame.check_mt(&m) && frame.check_tp(&m) && frame.check_cf(&m) && frame.check_kripke(&m));
        prop_assert_eq!(frame.kripke_relation(&m).unwrap(), r);
        prop_assert!(complex_algebra(&frame).check_completely_multiplicative(&m));
    }

    #[test]
    fn monotone_frames_are_upward_closed(seed in any::<u64>(), worlds in 1usize..=3, x in any::<u64>(), y in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = random_algebra(&mut rng, worlds, &bx(), AlgebraFlavor::MonotoneFrame);
        let frame = qfilter_frame(&alg, &MeetFamily::empty()).unwrap();
        let frame = frame.frame();
        prop_assert!(frame.check_mt(&bx()));
        let full = Subset::full(worlds);
        let small = Subset(x).intersection(full);
        let big = small.union(Subset(y).intersection(full));
        for c in 0..worlds {
            let ns = frame.neighborhoods(&bx(), c);
            prop_assert!(!ns.contains(&small) || ns.contains(&big));
        }
    }

    #[test]
    fn complex_algebra_preserves_properties(seed in any::<u64>(), worlds in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = random_frame(&mut rng, worlds);
        let alg = complex_algebra(&frame);
        for m in [bx(), Modality::new("E")] {
            prop_assert!(!frame.check_mt(&m) || alg.check_mt(&m));
            prop_assert!(!frame.check_tp(&m) || alg.check_tp(&m));
            prop_assert!(!frame.check_cf(&m) || alg.check_cf(&m));
            // Oracle: □X = {c | X ∈ N(c)} straight from the neighborhoods.
            for x in Subset::all(worlds) {
                let expected = Subset::from_indices((0..worlds).filter(|&c| frame.neighborhoods(&m, c).contains(&x)));
                prop_assert_eq!(alg.box_of(&m, x), expected);
                prop_assert_eq!(alg.diamond(&m, x), alg.box_of(&m, x.complement(worlds)).complement(worlds));
            }
        }
    }

    #[test]
    fn qfilter_frame_of_complex_algebra_is_the_frame(seed in any::<u64>(), worlds in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = random_frame(&mut rng, worlds);
        let alg = complex_algebra(&frame);
        let qf = qfilter_frame(&alg, &MeetFamily::empty()).unwrap();
        prop_assert_eq!(qf.frame(), &frame);
        let f = embedding(&alg, &MeetFamily::empty());
        prop_assert!(Subset::all(worlds).all(|x| f.apply(x) == x));
    }

    #[test]
    fn qfilter_frame_preserves_properties_and_embeds(seed in any::<u64>(), atoms in 1usize..=3, fl in flavor()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = random_algebra(&mut rng, atoms, &bx(), fl);
        let s = random_meet_family(&mut rng, &alg, 4);
        let qf = qfilter_frame(&alg, &s).unwrap();
        let m = bx();
        prop_assert!(!alg.check_mt(&m) || qf.frame().check_mt(&m));
        prop_assert!(!alg.check_tp(&m) || qf.frame().check_tp(&m));
        prop_assert!(!alg.check_cf(&m) || qf.frame().check_cf(&m));
        let report = verify_embedding(&alg, &embedding(&alg, &s), qf.frame(), &s);
        prop_assert!(report.all_ok(), "{:?}", report);
    }

    #[test]
    fn diamond_is_dual_on_random_tables(seed in any::<u64>(), atoms in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = ModalAlgebra::random(&mut rng, atoms, &[bx()]).unwrap();
        for x in alg.elements() {
            prop_assert_eq!(alg.diamond(&bx(), x), alg.complement(alg.box_of(&bx(), alg.complement(x))));
            prop_assert_eq!(alg.box_of(&bx(), x), alg.complement(alg.diamond(&bx(), alg.complement(x))));
        }
    }

    #[test]
    fn prime_filters_are_qfilters(seed in any::<u64>(), atoms in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = ModalAlgebra::random(&mut rng, atoms, &[bx()]).unwrap();
        let s = random_meet_family(&mut rng, &alg, 3);
        let filters = enumerate_prime_filters(&alg);
        prop_assert_eq!(filters.len(), atoms);
        for f in &filters {
            prop_assert!(is_qfilter(&alg, f, &s));
        }
    }
}

#[test]
fn two_modalities_survive_the_qfilter_construction() {
    let (e, c) = (Modality::new("E"), Modality::new("C"));
    let re = Relation::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let rc = omegamodal_core::frames::transitive_closure_union(&re, true);
    let frame = relation_to_frame(&AccessibilityRelation::new(3, BTreeMap::from([(e, re), (c, rc)])).unwrap());
    let alg = complex_algebra(&frame);
    let qf = qfilter_frame(&alg, &MeetFamily::empty()).unwrap();
    assert_eq!(qf.frame(), &frame);
}
