use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{freshen, is_linear, NodePath, Term};
use crate::table::TableError;
use crate::types::{
    arrow_type, as_base_type, base_type, typechecks, Action, Certificate, CheckError, DomainError,
    TypeExpr,
};

/// Largest `r^n` a DNF or inductive build accepts by default.
pub const DEFAULT_SIZE_GUARD: usize = 1024;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("table of size {size} exceeds the size guard {limit}")]
    SizeGuardExceeded { size: usize, limit: usize },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("wiring error: {0}")]
    Wiring(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("built term failed its self-check: {0}")]
    SelfCheck(String),
}

impl From<CheckError> for BuildError {
    fn from(e: CheckError) -> Self {
        BuildError::SelfCheck(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StyleTag {
    Circuit,
    Inductive,
    Hybrid,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub node_count: usize,
    /// Number of `const`, `const_f` and `cyc_f` auxiliary combinators.
    pub const_count: usize,
}

/// A closed linear term with the certificate that types it at
/// `declared_type`.
#[derive(Clone, Debug)]
pub struct BuiltTerm {
    pub term: Term,
    pub certificate: Certificate,
    pub declared_type: TypeExpr,
    pub stats: BuildStats,
    pub style: StyleTag,
    pub notes: Vec<String>,
}

impl BuiltTerm {
    /// Freshens binder names and verifies linearity and typing.
    pub(crate) fn finish(
        c: CTerm,
        declared_type: TypeExpr,
        const_count: usize,
        style: StyleTag,
    ) -> Result<BuiltTerm, BuildError> {
        let (term, certificate) = c.into_parts();
        let term = freshen(&term);
        if let Err(v) = is_linear(&term) {
            return Err(BuildError::SelfCheck(v.to_string()));
        }
        typechecks(&vec![], &term, &certificate, &declared_type)?;
        Ok(BuiltTerm {
            stats: BuildStats {
                node_count: term.node_count(),
                const_count,
            },
            term,
            certificate,
            declared_type,
            style,
            notes: Vec::new(),
        })
    }

    pub(crate) fn with_notes(mut self, notes: impl IntoIterator<Item = String>) -> Self {
        self.notes.extend(notes);
        self
    }

    pub(crate) fn with_style(mut self, style: StyleTag) -> Self {
        self.style = style;
        self
    }

    /// `(input radices, output radix)` when the declared type has the shape
    /// `T_{r1} -> … -> T_{rn} -> T_{r'}` (n may be 0).
    pub fn signature(&self) -> Option<(Vec<usize>, usize)> {
        signature_of(&self.declared_type)
    }

    /// Embeds this term (with its certificate) into a larger one.
    pub(crate) fn embed(&self) -> CTerm {
        CTerm {
            term: self.term.clone(),
            dirs: self
                .certificate
                .directives
                .iter()
                .map(|d| {
                    let mut p = d.path.0.clone();
                    p.reverse();
                    (p, d.action.clone())
                })
                .collect(),
        }
    }

    /// Embeds with an ascription to the declared type, as needed in head
    /// position.
    pub(crate) fn embed_ann(&self) -> CTerm {
        self.embed().ann(self.declared_type.clone())
    }
}

pub fn signature_of(a: &TypeExpr) -> Option<(Vec<usize>, usize)> {
    let mut ins = Vec::new();
    let mut t = a;
    while let TypeExpr::Arrow(d, rest) = t {
        ins.push(as_base_type(d)?);
        t = rest;
    }
    Some((ins, as_base_type(t)?))
}

/// `T_{r1} -> … -> T_{rn} -> T_{r'}`.
pub fn signature_type(inputs: &[usize], output: usize) -> Result<TypeExpr, DomainError> {
    let doms = inputs
        .iter()
        .map(|&r| base_type(r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TypeExpr::arrows(doms, base_type(output)?))
}

/// `U_{n,r}`; re-exported for builder signatures.
pub fn uniform_type(n: usize, r: usize) -> Result<TypeExpr, DomainError> {
    arrow_type(n, r)
}

/// A term under construction together with its typing directives. Paths are
/// kept reversed so that wrapping a term only appends a step.
#[derive(Clone, Debug)]
pub(crate) struct CTerm {
    pub term: Term,
    dirs: Vec<(Vec<usize>, Action)>,
}

impl CTerm {
    pub fn var(x: impl Into<String>) -> CTerm {
        CTerm {
            term: Term::var(x),
            dirs: Vec::new(),
        }
    }

    /// A term with no directives of its own.
    pub fn lift(term: Term) -> CTerm {
        CTerm {
            term,
            dirs: Vec::new(),
        }
    }

    fn under(dirs: &mut [(Vec<usize>, Action)], step: usize) {
        for (p, _) in dirs.iter_mut() {
            p.push(step);
        }
    }

    fn join(a: CTerm, b: CTerm, f: impl FnOnce(Term, Term) -> Term) -> CTerm {
        let (mut da, mut db) = (a.dirs, b.dirs);
        CTerm::under(&mut da, 0);
        CTerm::under(&mut db, 1);
        da.append(&mut db);
        CTerm {
            term: f(a.term, b.term),
            dirs: da,
        }
    }

    pub fn app(f: CTerm, a: CTerm) -> CTerm {
        CTerm::join(f, a, Term::app)
    }

    pub fn apps(f: CTerm, args: impl IntoIterator<Item = CTerm>) -> CTerm {
        args.into_iter().fold(f, CTerm::app)
    }

    pub fn abs(x: impl Into<String>, body: CTerm) -> CTerm {
        let mut dirs = body.dirs;
        CTerm::under(&mut dirs, 0);
        CTerm {
            term: Term::abs(x, body.term),
            dirs,
        }
    }

    pub fn abss<S: Into<String>>(params: impl IntoIterator<Item = S>, body: CTerm) -> CTerm {
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        params.into_iter().rev().fold(body, |b, x| CTerm::abs(x, b))
    }

    pub fn pair(a: CTerm, b: CTerm) -> CTerm {
        CTerm::join(a, b, Term::pair)
    }

    /// Right-nested tuple.
    pub fn tuple(parts: Vec<CTerm>) -> CTerm {
        let mut it = parts.into_iter().rev();
        let last = it.next().expect("tuple needs a component");
        it.fold(last, |acc, a| CTerm::pair(a, acc))
    }

    pub fn let_pair(x: impl Into<String>, y: impl Into<String>, rhs: CTerm, body: CTerm) -> CTerm {
        let (x, y) = (x.into(), y.into());
        CTerm::join(rhs, body, |r, b| Term::let_pair(x, y, r, b))
    }

    pub fn with(mut self, a: Action) -> CTerm {
        self.dirs.push((Vec::new(), a));
        self
    }

    pub fn inst(self, a: TypeExpr) -> CTerm {
        self.with(Action::Inst(a))
    }

    pub fn gen(self, v: &str) -> CTerm {
        self.with(Action::Gen(v.to_string()))
    }

    pub fn ann(self, a: TypeExpr) -> CTerm {
        self.with(Action::Ann(a))
    }

    pub fn into_parts(self) -> (Term, Certificate) {
        let mut cert = Certificate::new();
        for (mut p, a) in self.dirs {
            p.reverse();
            cert.push(NodePath(p), a);
        }
        (self.term, cert)
    }
}
