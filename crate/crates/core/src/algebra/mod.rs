//! Finite modal algebras, filters, Q-filter frames and the algebraic
//! frame-class checkers.

mod classes;
mod filters;
mod modal;
mod qfilter;

pub use classes::{
    c_implies_ec, check_ckl_algebra, check_ckl_kripke_consequences, check_gl_algebra, ck_axiom, mhformula, check_gl_frame, orbit_meet, CklKripkeReport,
    CklReport, GlReport,
};
pub use filters::{enumerate_prime_filters, is_qfilter, Filter, MeetFamily};
pub use modal::{
    complex_algebra, AlgebraError, ModalAlgebra, EXHAUSTIVE_MULTIPLICATIVITY_ATOMS, MAX_ATOMS,
};
pub use qfilter::{
    check_dfrm_conditions, embedding, find_dfrm_violation, qfilter_frame, qfilters, verify_embedding, DfrmClause,
    DfrmViolation, Embedding, EmbeddingReport, IndexingError, QFilterFrame,
};
