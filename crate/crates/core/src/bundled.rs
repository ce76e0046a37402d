//! Data files shipped with the crate, embedded at compile time.

use crate::formats::{parse_corpus, parse_frame, parse_proof};
use crate::frames::NeighborhoodFrame;
use crate::ordinal::OrdinalElement;
use crate::proofs::Proof;
use crate::syntax::Formula;

pub const CORPUS: &str = include_str!("../data/corpus.txt");
pub const FRAME3: &str = include_str!("../data/frame3.json");
pub const MHFORMULA_PROOF: &str = include_str!("../data/mhformula_proof.json");
pub const WITNESS: &str = include_str!("../data/witness.txt");

/// The 50 closed formulas of depth at most 3 over `P` and `q`.
pub fn corpus() -> Vec<Formula> {
    parse_corpus(CORPUS).expect("bundled corpus parses")
}

/// A three-world frame that is neither monotone nor topped.
pub fn frame3() -> NeighborhoodFrame {
    parse_frame(FRAME3).expect("bundled frame parses")
}

/// The PS_QCKL⁻ derivation of `C(p⊃Ep) ⊃ (p⊃Cp)`.
pub fn mhformula_proof() -> Proof {
    parse_proof(MHFORMULA_PROOF, None).expect("bundled proof parses").1
}

/// The element that is 0 exactly at 1.
pub fn witness() -> OrdinalElement {
    WITNESS.trim().parse().expect("bundled witness parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Ordinal;
    use crate::proofs::generate_mhformula_proof;
    use crate::syntax::Modality;

    #[test]
    fn bundled_assets_load() {
        let corpus = corpus();
        assert_eq!(corpus.len(), 50);
        assert!(corpus.iter().all(|f| f.is_closed() && f.depth() <= 3 && f.predicates().unwrap().len() <= 2));
        let frame = frame3();
        let m = Modality::default_box();
        assert!(!frame.check_mt(&m) && !frame.check_tp(&m));
        assert!(frame.neighborhoods(&m, 2).is_empty());
        assert_eq!(mhformula_proof(), generate_mhformula_proof());
        let w = witness();
        assert!(!w.value_at(Ordinal::Fin(1)));
        assert_eq!(w, crate::ordinal::OrdinalElement::zero_at([Ordinal::Fin(1)]));
    }
}
