//! Linear lambda terms for finite multiple-valued functions: syntax, typing,
//! reduction, synthesis (circuit and inductive styles), optimization and the
//! Belnap majority case study.

pub mod belnap;
pub mod bench;
pub mod circuit;
pub mod inductive;
pub mod optimize;
pub mod reduce;
pub mod syntax;
pub mod table;
pub mod types;
pub mod verify;
