//! Extensional semantics: monotone relations as upward-closed tuple sets,
//! finite domain enumeration and the naive fixpoint engine.

mod domain;
mod eval;
mod value;

pub use domain::{enumerate_domain, is_upward_closed, product, Domain, DomainCache, DEFAULT_DOMAIN_CAP};
pub use eval::{
    bottom, bottom_value, dump_model, eval_expr, herbrand_universe, interp_leq, is_fixpoint,
    least_model_naive, least_model_naive_traced, low_order_predicates, render_value, tp_step,
    universe_index, Evaluator, HState, Interpretation, NaiveModel, MAX_NAIVE_ITERATIONS,
};
pub use value::{tuple_leq, value_leq, Rel, SemValue, Tuple};
