//! Hilbert proof systems with ω-rules, proof objects and a bounded checker.

mod check;
mod generate;
mod system;
mod taut;

pub use check::{
    check_proof, CheckReport, CheckStatus, Justification, PremiseGenerator, Proof, RejectReason, Step,
    StepVerdict,
};
pub use generate::{
    builtin_premise_proof, generate_mhformula_proof, mh_antecedent, mhformula_premise_proof,
    mhformula_target, proof_formulas, soundness_spot_check, SoundnessReport, SoundnessViolation,
    MHFORMULA_GENERATOR,
};
pub use system::{
    instantiate_axiom, letters, prefix_letter, schema_template, AxiomSchema, InstantiateError,
    OmegaRuleDescriptor, OmegaShape, ProofSystem, SchemaKind, GAMMA, PHI,
};
pub use taut::{is_tautology, TooManyLetters, MAX_LETTERS};
