//! Neighborhood and algebraic valuations, bounded validity and the
//! frame/algebra duality harness.

mod model;
mod validity;

pub use model::{
    algebraic_to_model, eval_algebraic, eval_neighborhood, model_to_algebraic, tuple_at, tuple_count, tuple_index,
    AlgebraicModel, Assignment, EvalError, Facts, ModelError, NeighborhoodModel, PredTable,
};
pub use validity::{
    algebra_validates, check_duality, enumeration_size, frame_validates, AlgebraicCountermodel, AlgebraicValidity,
    Bounds, Countermodel, DualityEntry, DualityReport, FreeVarPolicy, Validity, ValidityError, DEFAULT_BUDGET,
};
