use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ty::{parse_type, TypeExpr};
use crate::syntax::{NodePath, SyntaxError};

/// What the checker does when it finishes the node at a directive's path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    /// ∀-Inst: the node's type must be `∀'a.A`; it becomes `A[B/'a]`.
    Inst(TypeExpr),
    /// ∀-Intro: the node's type `A` becomes `∀'a.A`, provided `'a` is not
    /// free in the types of the bindings the node consumes.
    Gen(String),
    /// Ascription: the node is checked against the given type. Lets closed
    /// combinators sit in function position without annotations on binders.
    Ann(TypeExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub path: NodePath,
    pub action: Action,
}

/// Ordered list of typing directives addressed by node path.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub directives: Vec<Directive>,
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("certificate entry {index}: {message}")]
    Entry { index: usize, message: String },
    #[error("certificate entry {index}: bad type: {source}")]
    Type {
        index: usize,
        #[source]
        source: SyntaxError,
    },
}

#[derive(Serialize, Deserialize)]
struct RawDirective {
    path: Vec<usize>,
    action: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none", default)]
    ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    var: Option<String>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, path: NodePath, action: Action) {
        self.directives.push(Directive { path, action });
    }

    pub fn len(&self) -> usize {
        self.directives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directives.is_empty()
    }

    /// True iff every instantiation uses a type variable.
    pub fn is_monomorphic(&self) -> bool {
        self.directives.iter().all(|d| match &d.action {
            Action::Inst(t) => matches!(t, TypeExpr::Var(_)),
            _ => true,
        })
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<RawDirective> = self
            .directives
            .iter()
            .map(|d| {
                let (action, ty, var) = match &d.action {
                    Action::Inst(t) => ("inst", Some(t.to_string()), None),
                    Action::Gen(v) => ("gen", None, Some(v.clone())),
                    Action::Ann(t) => ("ann", Some(t.to_string()), None),
                };
                RawDirective {
                    path: d.path.0.clone(),
                    action: action.into(),
                    ty,
                    var,
                }
            })
            .collect();
        serde_json::to_string_pretty(&raw).expect("certificate serializes")
    }

    pub fn from_json(src: &str) -> Result<Self, CertificateError> {
        let raw: Vec<RawDirective> = serde_json::from_str(src)?;
        let mut cert = Certificate::new();
        for (index, r) in raw.into_iter().enumerate() {
            let parse = |s: Option<String>| -> Result<TypeExpr, CertificateError> {
                let s = s.ok_or_else(|| CertificateError::Entry {
                    index,
                    message: "missing \"type\"".into(),
                })?;
                parse_type(&s).map_err(|source| CertificateError::Type { index, source })
            };
            let action = match r.action.as_str() {
                "inst" => Action::Inst(parse(r.ty)?),
                "ann" => Action::Ann(parse(r.ty)?),
                "gen" => {
                    let v = r.var.ok_or_else(|| CertificateError::Entry {
                        index,
                        message: "missing \"var\"".into(),
                    })?;
                    if !v.starts_with('\'') || v.len() < 2 {
                        return Err(CertificateError::Entry {
                            index,
                            message: format!("type variable must look like 'a, got {v:?}"),
                        });
                    }
                    Action::Gen(v)
                }
                other => {
                    return Err(CertificateError::Entry {
                        index,
                        message: format!("unknown action {other:?}"),
                    })
                }
            };
            cert.push(NodePath(r.path), action);
        }
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::base_type;

    #[test]
    fn json_round_trip() {
        let mut c = Certificate::new();
        c.push(NodePath(vec![0]), Action::Gen("'a".into()));
        c.push(NodePath(vec![0, 1]), Action::Inst(base_type(3).unwrap()));
        c.push(NodePath(vec![]), Action::Ann(TypeExpr::var("'b")));
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(c.to_json().contains("\"type\": \"T3\""));
    }

    #[test]
    fn monomorphism() {
        assert!(Certificate::new().is_monomorphic());
        let mut c = Certificate::new();
        c.push(NodePath::root(), Action::Inst(TypeExpr::var("'a")));
        assert!(c.is_monomorphic());
        c.push(NodePath::root(), Action::Inst(base_type(2).unwrap()));
        assert!(!c.is_monomorphic());
    }

    #[test]
    fn rejects_malformed_entries() {
        assert!(Certificate::from_json(r#"[{"path":[],"action":"gen"}]"#).is_err());
        assert!(Certificate::from_json(r#"[{"path":[],"action":"gen","var":"a"}]"#).is_err());
        assert!(Certificate::from_json(r#"[{"path":[],"action":"zap"}]"#).is_err());
        assert!(Certificate::from_json(r#"[{"path":[],"action":"inst","type":"T"}]"#).is_err());
        let ok = Certificate::from_json(r#"[{"path":[1,0],"action":"inst","type":"'a"}]"#).unwrap();
        assert_eq!(ok.directives[0].path, NodePath(vec![1, 0]));
    }
}
