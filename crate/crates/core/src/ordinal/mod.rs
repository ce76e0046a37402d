//! The interval subalgebra of `2^(ω+ω)` with the everyone-knows operator
//! `E` and common knowledge `C`, in closed form.

mod element;
mod ops;
mod ord;

pub use element::{ElementParseError, OrdinalElement};
pub use ops::{
    demo_incompleteness, op_c, op_e, sample_ordinals, truncated_meet_e, verify_ckl_laws, zero_set_info, CklLawReport,
    IncompletenessDemo, ZeroSetInfo,
};
pub use ord::{Ordinal, OrdinalParseError, OMEGA};
