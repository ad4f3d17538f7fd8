use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::cert::{Action, Certificate};
use super::ty::{ftv, subst_type, type_alpha_eq, TypeExpr};
use crate::syntax::{is_linear, LinearityViolation, NodePath, Term};

/// Ordered typing environment `x1:A1, ..., xn:An`.
pub type TypeEnv = Vec<(String, TypeExpr)>;

/// `Γ ⊢ t : A` for the node at `path`; `env` lists the bindings the node
/// consumes from its surroundings, in consumption order.
#[derive(Clone, Debug, Serialize)]
pub struct Judgement {
    pub path: NodePath,
    pub env: Vec<(String, String)>,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    /// Post-order: children before parents, the root last.
    pub judgements: Vec<Judgement>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearityKind {
    Unused,
    Duplicated,
}

impl fmt::Display for LinearityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinearityKind::Unused => "never consumed",
            LinearityKind::Duplicated => "consumed twice",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("LinearityError at {path}: `{var}` {kind}")]
    Linearity {
        path: NodePath,
        var: String,
        kind: LinearityKind,
    },
    #[error("TypeMismatch at {path}: {message}")]
    TypeMismatch { path: NodePath, message: String },
    #[error("BadDirective at {path}: {message}")]
    BadDirective { path: NodePath, message: String },
    #[error("unbound variable `{name}` at {path}")]
    Unbound { path: NodePath, name: String },
    #[error("certificate path {path} does not address a node")]
    BadPath { path: NodePath },
    #[error("environment binds `{0}` twice")]
    DuplicateBinding(String),
}

impl CheckError {
    pub fn path(&self) -> Option<&NodePath> {
        match self {
            CheckError::Linearity { path, .. }
            | CheckError::TypeMismatch { path, .. }
            | CheckError::BadDirective { path, .. }
            | CheckError::Unbound { path, .. }
            | CheckError::BadPath { path } => Some(path),
            CheckError::DuplicateBinding(_) => None,
        }
    }

    /// Short tag used in CLI output.
    pub fn kind(&self) -> &'static str {
        match self {
            CheckError::Linearity { .. } => "LinearityError",
            CheckError::TypeMismatch { .. } | CheckError::Unbound { .. } => "TypeMismatch",
            CheckError::BadDirective { .. } | CheckError::BadPath { .. } => "BadDirective",
            CheckError::DuplicateBinding(_) => "BadEnvironment",
        }
    }
}

/// Checks `env ⊢ t : expected` with ∀-Inst/∀-Intro placed by `cert`, and
/// records a judgement for every node.
pub fn check(
    env: &TypeEnv,
    t: &Term,
    cert: &Certificate,
    expected: &TypeExpr,
) -> Result<CheckReport, CheckError> {
    run(env, t, cert, expected, true)
}

/// Same verdict as [`check`] without recording judgements.
pub fn typechecks(
    env: &TypeEnv,
    t: &Term,
    cert: &Certificate,
    expected: &TypeExpr,
) -> Result<(), CheckError> {
    run(env, t, cert, expected, false).map(|_| ())
}

fn run(
    env: &TypeEnv,
    t: &Term,
    cert: &Certificate,
    expected: &TypeExpr,
    record: bool,
) -> Result<CheckReport, CheckError> {
    // Linearity is a property of the term alone; report it before any typing
    // premise so that `fn x=> x x` fails for its duplication at every type.
    if let Err(v) = is_linear(t) {
        let (var, kind) = match v {
            LinearityViolation::Unused(x) => (x, LinearityKind::Unused),
            LinearityViolation::Duplicated(x) => (x, LinearityKind::Duplicated),
        };
        return Err(CheckError::Linearity {
            path: NodePath::root(),
            var,
            kind,
        });
    }
    let mut dirs: HashMap<&[usize], Vec<&Action>> = HashMap::new();
    for d in &cert.directives {
        if t.subterm(&d.path).is_none() {
            return Err(CheckError::BadPath {
                path: d.path.clone(),
            });
        }
        dirs.entry(d.path.steps()).or_default().push(&d.action);
    }
    let mut ck = Checker {
        dirs,
        stack: Vec::new(),
        log: Vec::new(),
        path: Vec::new(),
        record,
        report: CheckReport::default(),
    };
    for (i, (x, a)) in env.iter().enumerate() {
        if env[..i].iter().any(|(y, _)| y == x) {
            return Err(CheckError::DuplicateBinding(x.clone()));
        }
        ck.stack.push(Binding {
            name: x.clone(),
            ty: a.clone(),
            used: false,
        });
    }
    for a in [expected]
        .into_iter()
        .chain(cert.directives.iter().filter_map(|d| match &d.action {
            Action::Inst(b) | Action::Ann(b) => Some(b),
            Action::Gen(_) => None,
        }))
    {
        ck.warn_quantifiers(a);
    }
    ck.check(t, expected)?;
    if let Some(b) = ck.stack.iter().find(|b| !b.used) {
        return Err(CheckError::Linearity {
            path: NodePath::root(),
            var: b.name.clone(),
            kind: LinearityKind::Unused,
        });
    }
    ck.report.warnings.sort();
    ck.report.warnings.dedup();
    Ok(ck.report)
}

struct Binding {
    name: String,
    ty: TypeExpr,
    used: bool,
}

struct Checker<'c> {
    dirs: HashMap<&'c [usize], Vec<&'c Action>>,
    stack: Vec<Binding>,
    /// Stack index of every consumption, in order.
    log: Vec<usize>,
    path: Vec<usize>,
    record: bool,
    report: CheckReport,
}

impl<'c> Checker<'c> {
    fn here(&self) -> NodePath {
        NodePath(self.path.clone())
    }

    fn mismatch(&self, message: String) -> CheckError {
        CheckError::TypeMismatch {
            path: self.here(),
            message,
        }
    }

    fn warn_quantifiers(&mut self, a: &TypeExpr) {
        match a {
            TypeExpr::Var(_) => {}
            TypeExpr::Prod(l, r) | TypeExpr::Arrow(l, r) => {
                self.warn_quantifiers(l);
                self.warn_quantifiers(r);
            }
            TypeExpr::Forall(v, body) => {
                if !matches!(body.as_ref(), TypeExpr::Arrow(..)) {
                    self.report
                        .warnings
                        .push(format!("quantifier {v} over a non-arrow body in {a}"));
                }
                self.warn_quantifiers(body);
            }
        }
    }

    fn node_dirs(&self) -> Vec<&'c Action> {
        self.dirs
            .get(self.path.as_slice())
            .cloned()
            .unwrap_or_default()
    }

    fn in_child<R>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> R) -> R {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn check(&mut self, t: &Term, expected: &TypeExpr) -> Result<(), CheckError> {
        let dirs = self.node_dirs();
        let (mark, log_mark) = (self.stack.len(), self.log.len());
        self.check_with(t, &dirs, expected)?;
        self.record(mark, log_mark, expected);
        Ok(())
    }

    fn infer(&mut self, t: &Term) -> Result<TypeExpr, CheckError> {
        let dirs = self.node_dirs();
        let (mark, log_mark) = (self.stack.len(), self.log.len());
        let a = self.infer_with(t, &dirs)?;
        self.record(mark, log_mark, &a);
        Ok(a)
    }

    fn record(&mut self, mark: usize, log_mark: usize, a: &TypeExpr) {
        if !self.record {
            return;
        }
        let env = self.log[log_mark..]
            .iter()
            .filter(|&&i| i < mark)
            .map(|&i| (self.stack[i].name.clone(), self.stack[i].ty.to_string()))
            .collect();
        self.report.judgements.push(Judgement {
            path: self.here(),
            env,
            ty: a.to_string(),
        });
    }

    /// ∀-Intro side condition: `v` must not be free in any binding from
    /// outside the node that the node consumed.
    fn gen_side_condition(&self, v: &str, mark: usize, log_mark: usize) -> Result<(), CheckError> {
        for &i in &self.log[log_mark..] {
            if i < mark && ftv(&self.stack[i].ty).contains(v) {
                return Err(CheckError::BadDirective {
                    path: self.here(),
                    message: format!(
                        "cannot generalize {v}: free in the type {} of consumed `{}`",
                        self.stack[i].ty, self.stack[i].name
                    ),
                });
            }
        }
        Ok(())
    }

    fn infer_with(&mut self, t: &Term, dirs: &[&Action]) -> Result<TypeExpr, CheckError> {
        let Some((last, rest)) = dirs.split_last() else {
            return self.infer_core(t);
        };
        match last {
            Action::Inst(b) => match self.infer_with(t, rest)? {
                TypeExpr::Forall(v, body) => Ok(subst_type(&body, &v, b)),
                other => Err(CheckError::BadDirective {
                    path: self.here(),
                    message: format!("Inst({b}) applied to non-quantified type {other}"),
                }),
            },
            Action::Gen(v) => {
                let (mark, log_mark) = (self.stack.len(), self.log.len());
                let a = self.infer_with(t, rest)?;
                self.gen_side_condition(v, mark, log_mark)?;
                let g = TypeExpr::forall(v.clone(), a);
                self.warn_quantifiers(&g);
                Ok(g)
            }
            Action::Ann(a) => {
                self.check_with(t, rest, a)?;
                Ok(a.clone())
            }
        }
    }

    fn check_with(
        &mut self,
        t: &Term,
        dirs: &[&Action],
        expected: &TypeExpr,
    ) -> Result<(), CheckError> {
        match dirs.split_last() {
            None => self.check_core(t, expected),
            Some((Action::Gen(v), rest)) => match expected {
                TypeExpr::Forall(b, body) if !ftv(expected).contains(v.as_str()) => {
                    let (mark, log_mark) = (self.stack.len(), self.log.len());
                    let body = subst_type(body, b, &TypeExpr::var(v.clone()));
                    self.check_with(t, rest, &body)?;
                    self.gen_side_condition(v, mark, log_mark)
                }
                _ => {
                    let a = self.infer_with(t, dirs)?;
                    self.compare(&a, expected)
                }
            },
            Some(_) => {
                let a = self.infer_with(t, dirs)?;
                self.compare(&a, expected)
            }
        }
    }

    fn compare(&self, found: &TypeExpr, expected: &TypeExpr) -> Result<(), CheckError> {
        if type_alpha_eq(found, expected) {
            Ok(())
        } else {
            Err(self.mismatch(format!("expected {expected}, found {found}")))
        }
    }

    fn bind(&mut self, x: &str, a: TypeExpr) {
        self.stack.push(Binding {
            name: x.to_string(),
            ty: a,
            used: false,
        });
    }

    fn unbind(&mut self) -> Result<(), CheckError> {
        let b = self.stack.pop().expect("binding stack underflow");
        if b.used {
            Ok(())
        } else {
            Err(CheckError::Linearity {
                path: self.here(),
                var: b.name,
                kind: LinearityKind::Unused,
            })
        }
    }

    fn check_core(&mut self, t: &Term, expected: &TypeExpr) -> Result<(), CheckError> {
        match (t, expected) {
            (Term::Abs(x, body), TypeExpr::Arrow(a, b)) => {
                self.bind(x, a.as_ref().clone());
                self.in_child(0, |c| c.check(body, b))?;
                self.unbind()
            }
            (Term::Abs(..), _) => Err(self.mismatch(format!(
                "abstraction checked against non-arrow type {expected}"
            ))),
            (Term::Pair(l, r), TypeExpr::Prod(a, b)) => {
                self.in_child(0, |c| c.check(l, a))?;
                self.in_child(1, |c| c.check(r, b))
            }
            (Term::Pair(..), _) => {
                Err(self.mismatch(format!("pair checked against non-product type {expected}")))
            }
            (Term::LetPair(x, y, rhs, body), _) => {
                let (a, b) = self.destructure(rhs)?;
                self.bind(x, a);
                self.bind(y, b);
                self.in_child(1, |c| c.check(body, expected))?;
                self.unbind()?;
                self.unbind()
            }
            _ => {
                let a = self.infer_core(t)?;
                self.compare(&a, expected)
            }
        }
    }

    fn destructure(&mut self, rhs: &Term) -> Result<(TypeExpr, TypeExpr), CheckError> {
        match self.in_child(0, |c| c.infer(rhs))? {
            TypeExpr::Prod(a, b) => Ok((*a, *b)),
            other => Err(self.mismatch(format!("let destructures non-product type {other}"))),
        }
    }

    fn infer_core(&mut self, t: &Term) -> Result<TypeExpr, CheckError> {
        match t {
            Term::Var(x) => {
                let Some(i) = self.stack.iter().rposition(|b| &b.name == x) else {
                    return Err(CheckError::Unbound {
                        path: self.here(),
                        name: x.clone(),
                    });
                };
                if self.stack[i].used {
                    return Err(CheckError::Linearity {
                        path: self.here(),
                        var: x.clone(),
                        kind: LinearityKind::Duplicated,
                    });
                }
                self.stack[i].used = true;
                self.log.push(i);
                Ok(self.stack[i].ty.clone())
            }
            Term::App(f, a) => match self.in_child(0, |c| c.infer(f))? {
                TypeExpr::Arrow(dom, cod) => {
                    self.in_child(1, |c| c.check(a, &dom))?;
                    Ok(*cod)
                }
                other => Err(CheckError::TypeMismatch {
                    path: NodePath([self.path.as_slice(), &[0]].concat()),
                    message: format!("applied term has non-function type {other}"),
                }),
            },
            Term::Abs(..) => Err(self.mismatch(
                "cannot synthesize the type of an abstraction here; it needs an ascription".into(),
            )),
            Term::Pair(l, r) => {
                let a = self.in_child(0, |c| c.infer(l))?;
                let b = self.in_child(1, |c| c.infer(r))?;
                Ok(TypeExpr::prod(a, b))
            }
            Term::LetPair(x, y, rhs, body) => {
                let (a, b) = self.destructure(rhs)?;
                self.bind(x, a);
                self.bind(y, b);
                let c = self.in_child(1, |c| c.infer(body))?;
                self.unbind()?;
                self.unbind()?;
                Ok(c)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use crate::types::{base_type, parse_type};

    fn cert(entries: &[(&[usize], Action)]) -> Certificate {
        let mut c = Certificate::new();
        for (p, a) in entries {
            c.push(NodePath(p.to_vec()), a.clone());
        }
        c
    }

    #[test]
    fn identity_at_polymorphic_type() {
        let i = parse_term("fn x=> x").unwrap();
        let c = cert(&[(&[], Action::Gen("'a".into()))]);
        let ty = parse_type("forall 'a. 'a -> 'a").unwrap();
        let rep = check(&vec![], &i, &c, &ty).unwrap();
        assert_eq!(rep.judgements.last().unwrap().path, NodePath::root());
        assert_eq!(rep.judgements.len(), 2);
        assert!(rep.warnings.is_empty());
    }

    #[test]
    fn values_at_t3() {
        let t3 = base_type(3).unwrap();
        let c = cert(&[(&[], Action::Gen("'a".into()))]);
        for body in ["f0 (f1 (f2 x))", "f1 (f2 (f0 x))", "f2 (f0 (f1 x))"] {
            let v = parse_term(&format!("fn f2=> fn f1=> fn f0=> fn x=> {body}")).unwrap();
            check(&vec![], &v, &c, &t3).unwrap();
        }
    }

    #[test]
    fn duplicate_use_is_linearity_error() {
        let t = parse_term("fn x=> x x").unwrap();
        let ty = parse_type("'a -> 'a").unwrap();
        let e = check(&vec![], &t, &Certificate::new(), &ty).unwrap_err();
        assert!(matches!(
            e,
            CheckError::Linearity {
                kind: LinearityKind::Duplicated,
                ..
            }
        ));
        let t = parse_term("fn x=> fn y=> x").unwrap();
        let ty = parse_type("'a -> 'b -> 'a").unwrap();
        let e = check(&vec![], &t, &Certificate::new(), &ty).unwrap_err();
        assert!(matches!(
            e,
            CheckError::Linearity {
                kind: LinearityKind::Unused,
                ..
            }
        ));
    }

    #[test]
    fn gen_side_condition() {
        // fn x=> x cannot be generalized over 'a while x : 'a is free outside.
        let t = parse_term("y").unwrap();
        let env = vec![("y".to_string(), TypeExpr::var("'a"))];
        let c = cert(&[(&[], Action::Gen("'a".into()))]);
        let ty = parse_type("forall 'a. 'a").unwrap();
        let e = check(&env, &t, &c, &ty).unwrap_err();
        assert!(matches!(e, CheckError::BadDirective { .. }), "{e}");
        // Generalizing a variable that does not occur in consumed bindings is fine,
        // though the non-arrow body is flagged.
        let env = vec![("y".to_string(), TypeExpr::var("'b"))];
        let rep = check(&env, &t, &c, &parse_type("forall 'a. 'b").unwrap()).unwrap();
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn inst_and_env_permutations() {
        let t = parse_term("h (fn y=> y) x").unwrap();
        let t1 = base_type(1).unwrap();
        let env_a = vec![
            ("h".to_string(), t1.clone()),
            ("x".to_string(), TypeExpr::var("'b")),
        ];
        let env_b: TypeEnv = env_a.iter().rev().cloned().collect();
        let c = cert(&[(&[0, 0], Action::Inst(TypeExpr::var("'b")))]);
        let b = TypeExpr::var("'b");
        check(&env_a, &t, &c, &b).unwrap();
        check(&env_b, &t, &c, &b).unwrap();
        // Inst on a non-quantified node.
        let bad = cert(&[(&[0, 1], Action::Inst(TypeExpr::var("'b")))]);
        assert!(check(&env_a, &t, &bad, &b).is_err());
        assert!(matches!(
            check(&env_a, &t, &cert(&[(&[7], Action::Gen("'a".into()))]), &b),
            Err(CheckError::BadPath { .. })
        ));
    }

    #[test]
    fn ascription_in_head_position() {
        let t = parse_term("(fn x=> x) y").unwrap();
        let env = vec![("y".to_string(), TypeExpr::var("'b"))];
        let b = TypeExpr::var("'b");
        assert!(check(&env, &t, &Certificate::new(), &b).is_err());
        let c = cert(&[(&[0], Action::Ann(parse_type("'b -> 'b").unwrap()))]);
        check(&env, &t, &c, &b).unwrap();
    }

    #[test]
    fn let_and_pairs() {
        let t = parse_term("fn p=> let val (x,y)=p in (y, x) end").unwrap();
        let ty = parse_type("'a * 'b -> 'b * 'a").unwrap();
        check(&vec![], &t, &Certificate::new(), &ty).unwrap();
        let wrong = parse_type("'a * 'b -> 'a * 'b").unwrap();
        assert!(matches!(
            check(&vec![], &t, &Certificate::new(), &wrong),
            Err(CheckError::TypeMismatch { .. })
        ));
    }
}
