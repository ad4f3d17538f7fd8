use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{describe, lex, Cursor, SyntaxError, Tok};

/// Types of the second-order linear system. Type-variable names carry their
/// leading quote (`'a`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Var(String),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Forall(String, Box<TypeExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("domain error: {0}")]
pub struct DomainError(pub String);

impl TypeExpr {
    pub fn var(name: impl Into<String>) -> TypeExpr {
        TypeExpr::Var(name.into())
    }

    pub fn arrow(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Box::new(a), Box::new(b))
    }

    pub fn prod(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: TypeExpr) -> TypeExpr {
        TypeExpr::Forall(v.into(), Box::new(body))
    }

    /// `a1 -> a2 -> ... -> result`.
    pub fn arrows(args: impl IntoIterator<Item = TypeExpr>, result: TypeExpr) -> TypeExpr {
        let args: Vec<TypeExpr> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, a| TypeExpr::arrow(a, acc))
    }

    /// Right-nested product of the given components (at least one).
    pub fn tuple(parts: Vec<TypeExpr>) -> TypeExpr {
        let mut it = parts.into_iter().rev();
        let last = it.next().expect("tuple needs at least one component");
        it.fold(last, |acc, a| TypeExpr::prod(a, acc))
    }

    /// Splits `a1 -> ... -> an -> r` into `n` domains and the remainder.
    pub fn split_arrows(&self, n: usize) -> Option<(Vec<&TypeExpr>, &TypeExpr)> {
        let mut doms = Vec::with_capacity(n);
        let mut t = self;
        for _ in 0..n {
            match t {
                TypeExpr::Arrow(a, b) => {
                    doms.push(a.as_ref());
                    t = b;
                }
                _ => return None,
            }
        }
        Some((doms, t))
    }

    pub fn is_forall(&self) -> bool {
        matches!(self, TypeExpr::Forall(..))
    }
}

/// Free type variables, following FTV('a) = {'a}, FTV(A*B) = FTV(A->B) =
/// FTV(A) ∪ FTV(B), FTV(∀'a.A) = FTV(A) \ {'a}.
pub fn ftv(a: &TypeExpr) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    ftv_into(a, &mut Vec::new(), &mut out);
    out
}

fn ftv_into(a: &TypeExpr, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match a {
        TypeExpr::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        TypeExpr::Prod(l, r) | TypeExpr::Arrow(l, r) => {
            ftv_into(l, bound, out);
            ftv_into(r, bound, out);
        }
        TypeExpr::Forall(v, body) => {
            bound.push(v.clone());
            ftv_into(body, bound, out);
            bound.pop();
        }
    }
}

fn all_tvars(a: &TypeExpr, out: &mut BTreeSet<String>) {
    match a {
        TypeExpr::Var(v) => {
            out.insert(v.clone());
        }
        TypeExpr::Prod(l, r) | TypeExpr::Arrow(l, r) => {
            all_tvars(l, out);
            all_tvars(r, out);
        }
        TypeExpr::Forall(v, body) => {
            out.insert(v.clone());
            all_tvars(body, out);
        }
    }
}

fn fresh_tvar(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded type-variable supply")
}

/// Capture-avoiding `a[b/v]`.
pub fn subst_type(a: &TypeExpr, v: &str, b: &TypeExpr) -> TypeExpr {
    let fv_b = ftv(b);
    subst_rec(a, v, b, &fv_b)
}

fn subst_rec(a: &TypeExpr, v: &str, b: &TypeExpr, fv_b: &BTreeSet<String>) -> TypeExpr {
    match a {
        TypeExpr::Var(x) => {
            if x == v {
                b.clone()
            } else {
                a.clone()
            }
        }
        TypeExpr::Prod(l, r) => TypeExpr::prod(subst_rec(l, v, b, fv_b), subst_rec(r, v, b, fv_b)),
        TypeExpr::Arrow(l, r) => {
            TypeExpr::arrow(subst_rec(l, v, b, fv_b), subst_rec(r, v, b, fv_b))
        }
        TypeExpr::Forall(x, body) => {
            if x == v || !ftv(body).contains(v) {
                return a.clone();
            }
            if fv_b.contains(x) {
                let mut avoid = fv_b.clone();
                all_tvars(body, &mut avoid);
                avoid.insert(v.to_string());
                let x2 = fresh_tvar(x, &avoid);
                let renamed = subst_type(body, x, &TypeExpr::Var(x2.clone()));
                TypeExpr::forall(x2, subst_rec(&renamed, v, b, fv_b))
            } else {
                TypeExpr::forall(x.clone(), subst_rec(body, v, b, fv_b))
            }
        }
    }
}

/// Equality up to renaming of bound type variables.
pub fn type_alpha_eq(a: &TypeExpr, b: &TypeExpr) -> bool {
    fn go<'a>(a: &'a TypeExpr, b: &'a TypeExpr, env: &mut Vec<(&'a str, &'a str)>) -> bool {
        match (a, b) {
            (TypeExpr::Var(x), TypeExpr::Var(y)) => {
                let bx = env.iter().rposition(|(l, _)| *l == x.as_str());
                let by = env.iter().rposition(|(_, r)| *r == y.as_str());
                match (bx, by) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (TypeExpr::Prod(a1, b1), TypeExpr::Prod(a2, b2))
            | (TypeExpr::Arrow(a1, b1), TypeExpr::Arrow(a2, b2)) => {
                go(a1, a2, env) && go(b1, b2, env)
            }
            (TypeExpr::Forall(x, b1), TypeExpr::Forall(y, b2)) => {
                env.push((x, y));
                let ok = go(b1, b2, env);
                env.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// `T_r = ∀'a. ('a->'a) -> ... r times ... -> ('a->'a)`.
pub fn base_type(r: usize) -> Result<TypeExpr, DomainError> {
    if r < 1 {
        return Err(DomainError(format!("radix must be at least 1, got {r}")));
    }
    let endo = TypeExpr::arrow(TypeExpr::var("'a"), TypeExpr::var("'a"));
    Ok(TypeExpr::forall(
        "'a",
        TypeExpr::arrows(std::iter::repeat_n(endo.clone(), r), endo),
    ))
}

/// `U_{n,r} = T_r -> ... n ... -> T_r -> T_r`; `U_{0,r} = T_r`.
pub fn arrow_type(n: usize, r: usize) -> Result<TypeExpr, DomainError> {
    let t = base_type(r)?;
    Ok(TypeExpr::arrows(std::iter::repeat_n(t.clone(), n), t))
}

/// `T_r -> (T_r * ... n ... * T_r)` with right-nested products.
pub fn dup_type(n: usize, r: usize) -> Result<TypeExpr, DomainError> {
    if n < 2 {
        return Err(DomainError(format!(
            "duplication arity must be at least 2, got {n}"
        )));
    }
    let t = base_type(r)?;
    Ok(TypeExpr::arrow(t.clone(), TypeExpr::tuple(vec![t; n])))
}

/// Recognizes a type that is alpha-equal to some `T_r`.
pub fn as_base_type(a: &TypeExpr) -> Option<usize> {
    let TypeExpr::Forall(v, body) = a else {
        return None;
    };
    let endo_of = |t: &TypeExpr| match t {
        TypeExpr::Arrow(l, r) => {
            matches!((l.as_ref(), r.as_ref()), (TypeExpr::Var(x), TypeExpr::Var(y)) if x == v && y == v)
        }
        _ => false,
    };
    let mut r = 0;
    let mut t = body.as_ref();
    while let TypeExpr::Arrow(l, rest) = t {
        if !endo_of(l) {
            break;
        }
        r += 1;
        t = rest;
    }
    (r >= 1 && endo_of(t)).then_some(r)
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(self, f)
    }
}

fn write_type(t: &TypeExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        TypeExpr::Forall(v, body) => {
            if let Some(r) = as_base_type(t) {
                return write!(f, "T{r}");
            }
            write!(f, "forall {v}. ")?;
            write_type(body, f)
        }
        TypeExpr::Arrow(a, b) => {
            write_prod(a, f)?;
            write!(f, " -> ")?;
            write_type(b, f)
        }
        _ => write_prod(t, f),
    }
}

fn write_prod(t: &TypeExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        TypeExpr::Prod(a, b) => {
            write_atom(a, f)?;
            write!(f, " * ")?;
            write_prod(b, f)
        }
        _ => write_atom(t, f),
    }
}

fn write_atom(t: &TypeExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        TypeExpr::Var(v) => write!(f, "{v}"),
        TypeExpr::Forall(..) if as_base_type(t).is_some() => write_type(t, f),
        _ => {
            write!(f, "(")?;
            write_type(t, f)?;
            write!(f, ")")
        }
    }
}

/// Parses the type syntax: `forall 'a. A`, `A -> B` (right-associative),
/// `A * B` (binds tighter than `->`), `'a`, `(A)` and `T<r>` for the base type.
pub fn parse_type(src: &str) -> Result<TypeExpr, SyntaxError> {
    let mut cur = Cursor::new(lex(src)?);
    let t = ty(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

fn ty(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    if *cur.peek() == Tok::Forall {
        cur.next();
        let v = match cur.peek().clone() {
            Tok::TVar(v) => {
                cur.next();
                v
            }
            other => {
                return Err(cur.error(format!(
                    "expected type variable, found {}",
                    describe(&other)
                )))
            }
        };
        cur.expect(Tok::Dot, "`.`")?;
        return Ok(TypeExpr::forall(v, ty(cur)?));
    }
    let left = prod(cur)?;
    if *cur.peek() == Tok::TArrow {
        cur.next();
        Ok(TypeExpr::arrow(left, ty(cur)?))
    } else {
        Ok(left)
    }
}

fn prod(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    let left = atom(cur)?;
    if *cur.peek() == Tok::Star {
        cur.next();
        Ok(TypeExpr::prod(left, prod(cur)?))
    } else {
        Ok(left)
    }
}

fn atom(cur: &mut Cursor) -> Result<TypeExpr, SyntaxError> {
    match cur.peek().clone() {
        Tok::TVar(v) => {
            cur.next();
            Ok(TypeExpr::Var(v))
        }
        Tok::LParen => {
            cur.next();
            let t = ty(cur)?;
            cur.expect(Tok::RParen, "`)`")?;
            Ok(t)
        }
        Tok::Ident(word) if word == "T" || base_sugar(&word).is_some() => {
            let err = cur.error("radix of `T` must be at least 1");
            cur.next();
            let r = match base_sugar(&word) {
                Some(r) => r,
                None => match cur.peek().clone() {
                    Tok::Int(r) => {
                        cur.next();
                        r
                    }
                    other => {
                        return Err(cur.error(format!(
                            "expected radix after `T`, found {}",
                            describe(&other)
                        )))
                    }
                },
            };
            base_type(r).map_err(|_| err)
        }
        other => Err(cur.error(format!("expected a type, found {}", describe(&other)))),
    }
}

/// `T3` lexes as one identifier.
fn base_sugar(word: &str) -> Option<usize> {
    let digits = word.strip_prefix('T')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TypeExpr {
        parse_type(s).unwrap()
    }

    #[test]
    fn ftv_examples() {
        assert_eq!(ftv(&t("'a")), BTreeSet::from(["'a".to_string()]));
        assert!(ftv(&t("forall 'a. 'a -> 'a")).is_empty());
        assert_eq!(
            ftv(&t("'a * (forall 'a. 'a)")),
            BTreeSet::from(["'a".to_string()])
        );
    }

    #[test]
    fn subst_examples() {
        let t2 = base_type(2).unwrap();
        assert_eq!(
            subst_type(&t("'a -> 'a"), "'a", &t2),
            TypeExpr::arrow(t2.clone(), t2.clone())
        );
        assert_eq!(
            subst_type(&t("forall 'a. 'a"), "'a", &t("'b")),
            t("forall 'a. 'a")
        );
        // capture avoidance
        let s = subst_type(&t("forall 'b. 'a -> 'b"), "'a", &t("'b"));
        assert!(type_alpha_eq(&s, &t("forall 'c. 'b -> 'c")));
        assert!(!type_alpha_eq(&s, &t("forall 'b. 'b -> 'b")));
    }

    #[test]
    fn instantiating_base_type_at_itself() {
        let tr = base_type(3).unwrap();
        let TypeExpr::Forall(v, body) = &tr else {
            panic!()
        };
        let inst = subst_type(body, v, &tr);
        let endo = TypeExpr::arrow(tr.clone(), tr.clone());
        assert_eq!(inst, TypeExpr::arrows(vec![endo.clone(); 3], endo));
    }

    #[test]
    fn constructors() {
        assert_eq!(
            base_type(2).unwrap(),
            t("forall 'a. ('a->'a)->('a->'a)->('a->'a)")
        );
        assert_eq!(arrow_type(0, 3).unwrap(), base_type(3).unwrap());
        assert_eq!(dup_type(2, 3).unwrap(), t("T3 -> T3 * T3"));
        assert_eq!(dup_type(3, 2).unwrap(), t("T2 -> T2 * (T2 * T2)"));
        assert!(base_type(0).is_err());
        assert!(dup_type(1, 2).is_err());
    }

    #[test]
    fn sugar_round_trips() {
        for r in 1..6 {
            let b = base_type(r).unwrap();
            assert_eq!(as_base_type(&b), Some(r));
            assert_eq!(b.to_string(), format!("T{r}"));
        }
        assert_eq!(t("T 3"), base_type(3).unwrap());
        let u = t("T3 -> T3 -> T3");
        assert_eq!(u, arrow_type(2, 3).unwrap());
        assert_eq!(u.to_string(), "T3 -> T3 -> T3");
        let odd = t("forall 'a. ('a -> 'a) * 'a -> 'b");
        assert_eq!(parse_type(&odd.to_string()).unwrap(), odd);
        assert_eq!(as_base_type(&t("forall 'a. 'a -> 'a")), None);
        assert_eq!(as_base_type(&t("forall 'a. ('a -> 'a) -> 'a")), None);
    }
}
