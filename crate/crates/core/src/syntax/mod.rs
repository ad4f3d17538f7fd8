//! Term representation, concrete syntax, alpha-equivalence, linearity and
//! capture-avoiding substitution.

mod parse;
mod print;
mod term;

pub(crate) use parse::{describe, lex, Cursor, Tok};
pub use parse::{parse_term, SyntaxError};
pub use print::print_term;
pub use term::{
    alpha_eq, fresh_name, freshen, is_linear, is_valid_ident, name_stem, substitute,
    LinearityViolation, NodePath, ShapeCounts, Term,
};
