//! Neighborhood and algebraic semantics for predicate modal logics with
//! ω-rules: frames, modal algebras, Q-filter frames, valuations, bounded
//! validity, proof systems with bounded ω-rule checking, and the interval
//! algebra over `ω+ω`.

pub mod algebra;
pub mod bits;
pub mod bundled;
pub mod enumerate;
pub mod formats;
pub mod frames;
pub mod ordinal;
pub mod proofs;
pub mod semantics;
pub mod syntax;

pub use algebra::{complex_algebra, MeetFamily, ModalAlgebra};
pub use bits::{Element, Subset, WorldSet};
pub use frames::{AccessibilityRelation, NeighborhoodFrame, Relation};
pub use ordinal::{Ordinal, OrdinalElement};
pub use proofs::{check_proof, CheckReport, CheckStatus, Proof, ProofSystem};
pub use semantics::{frame_validates, Bounds, NeighborhoodModel, Validity};
pub use syntax::{parse, Formula, Modality};
