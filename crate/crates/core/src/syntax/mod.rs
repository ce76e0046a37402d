//! Formula syntax: the AST, its concrete grammar, and substitution.

mod formula;
mod parser;
mod printer;
mod subst;

pub use formula::{ArityClash, Formula, Modality};
pub use parser::{parse, ParseError};
pub use subst::{
    apply_substitution, fresh_var, is_free_for, rename_free, substitute_var, Replacement,
    SubstArityError, SubstitutionMap,
};

/// Free variables of `f`.
pub fn free_vars(f: &Formula) -> std::collections::BTreeSet<String> {
    f.free_vars()
}
