//! Second-order linear types, certificates and the directive-driven checker.

mod cert;
mod check;
mod ty;

pub use cert::{Action, Certificate, CertificateError, Directive};
pub use check::{check, typechecks, CheckError, CheckReport, Judgement, LinearityKind, TypeEnv};
pub use ty::{
    arrow_type, as_base_type, base_type, dup_type, ftv, parse_type, subst_type, type_alpha_eq,
    DomainError, TypeExpr,
};
