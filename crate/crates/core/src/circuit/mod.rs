//! Circuit-style synthesis: constants, one- and two-variable builders,
//! literals, copies, composition and generalized DNF, each emitted with the
//! certificate that types it.

mod basic;
mod built;
mod compose;
mod copy;
mod dnf;

pub use basic::{
    add_mod_table, build_add_mod, build_binary, build_binary_rows, build_const_f,
    build_const_unary, build_cyc, build_cyc_f, build_identity, build_literal, build_row,
    build_row_slots, build_unary, build_unary_slots, const_slots, literal_table, max_table,
    min_table, slot_value, Slot,
};
pub(crate) use basic::{radix_notes, square_radix};
pub(crate) use built::CTerm;
pub use built::{
    signature_of, signature_type, uniform_type, BuildError, BuildStats, BuiltTerm, StyleTag,
    DEFAULT_SIZE_GUARD,
};
pub use compose::{
    build_conj, build_const_n, build_disj, build_proj, compile_circuit, compose_linear, Node,
};
pub use copy::{build_copy, build_copy_n, build_tp_app, build_tp_app_n};
pub use dnf::{build_dnf, build_dnf_guarded, build_hetero};
pub(crate) use dnf::{guard, uniform};
