//! β₁/β₂ (optionally η₁/η₂) reduction with step accounting, value
//! encodings of `T_r`, and evaluation of applied combinators.

mod eval;
mod nbe;
mod step;
mod values;

pub use eval::{eval_applied, normalize_applied, EvalError};
pub use nbe::{normalize_app, normalize_fast, NbeError};
pub use step::{
    first_redex, is_normal, normalize, redex_rule, redexes, step, step_at, NormalizeResult, Rule,
    RuleSet, StepCount, DEFAULT_FUEL,
};
pub use values::{
    cyclic_order, decode_tuple, decode_value, encode_value, enumerate_normal_inhabitants,
    permutations, value_certificate, Decoded, INHABITANT_GUARD,
};
