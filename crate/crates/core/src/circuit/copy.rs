use super::basic::{const_term, value};
use super::built::{BuildError, BuiltTerm, CTerm, StyleTag};
use crate::types::{base_type, dup_type, DomainError, TypeExpr};

/// `fn h=> fn z=> let (f1,h1)=h in let (x1,z1)=z in … (f1 x1, (…, h_{n-1} z_{n-1}))`.
fn tp_app_term(n: usize) -> CTerm {
    fn go(k: usize, n: usize, h: String, z: String) -> CTerm {
        if k == n {
            return CTerm::app(CTerm::var(h), CTerm::var(z));
        }
        let (f, h2, x, z2) = (
            format!("f{k}"),
            format!("h{k}"),
            format!("x{k}"),
            format!("z{k}"),
        );
        let rest = go(k + 1, n, h2.clone(), z2.clone());
        let pair = CTerm::pair(
            CTerm::app(CTerm::var(f.clone()), CTerm::var(x.clone())),
            rest,
        );
        CTerm::let_pair(
            f,
            h2,
            CTerm::var(h),
            CTerm::let_pair(x, z2, CTerm::var(z), pair),
        )
    }
    CTerm::abss(["h", "z"], go(1, n, "h".into(), "z".into()))
}

/// `(A1->C1) * … * (An->Cn) -> A1 * … * An -> C1 * … * Cn`.
fn tp_app_type(doms: Vec<TypeExpr>, cods: Vec<TypeExpr>) -> TypeExpr {
    let fs = doms
        .iter()
        .zip(&cods)
        .map(|(a, c)| TypeExpr::arrow(a.clone(), c.clone()))
        .collect();
    TypeExpr::arrows(
        [TypeExpr::tuple(fs), TypeExpr::tuple(doms)],
        TypeExpr::tuple(cods),
    )
}

/// The n-component pair-application helper at its most general type.
pub fn build_tp_app_n(n: usize) -> Result<BuiltTerm, BuildError> {
    if n < 2 {
        return Err(DomainError(format!("tp_app needs at least 2 components, got {n}")).into());
    }
    let (avars, cvars): (Vec<String>, Vec<String>) = if n == 2 {
        (
            vec!["'a".into(), "'b".into()],
            vec!["'c".into(), "'d".into()],
        )
    } else {
        (
            (1..=n).map(|k| format!("'a{k}")).collect(),
            (1..=n).map(|k| format!("'c{k}")).collect(),
        )
    };
    let body = tp_app_type(
        avars.iter().map(TypeExpr::var).collect(),
        cvars.iter().map(TypeExpr::var).collect(),
    );
    let quantified: Vec<&String> = avars.iter().chain(&cvars).collect();
    let ty = quantified
        .iter()
        .rev()
        .fold(body, |acc, v| TypeExpr::forall((*v).clone(), acc));
    let mut c = tp_app_term(n);
    for v in quantified.iter().rev() {
        c = c.gen(v);
    }
    BuiltTerm::finish(c, ty, 0, StyleTag::Circuit)
}

/// `tp_app (f, g) (x, y) ⇒ (f x, g y)`.
pub fn build_tp_app() -> Result<BuiltTerm, BuildError> {
    build_tp_app_n(2)
}

/// `copy_{r,n} = fn v=> let (x,y) = v S_{r-1} … S_0 (v_0, …, v_0) in (x,y) end`
/// with `S_k = tp_app (const_k, …, const_k)`.
pub fn build_copy_n(r: usize, n: usize) -> Result<BuiltTerm, BuildError> {
    let ty = dup_type(n, r)?;
    let t = base_type(r)?;
    let p = TypeExpr::tuple(vec![t.clone(); n]);
    let tp_ty = tp_app_type(vec![t.clone(); n], vec![t; n]);
    let mut args = Vec::with_capacity(r + 1);
    for k in (0..r).rev() {
        let consts = (0..n)
            .map(|_| const_term(k, r))
            .collect::<Result<Vec<_>, _>>()?;
        args.push(CTerm::app(
            tp_app_term(n).ann(tp_ty.clone()),
            CTerm::tuple(consts),
        ));
    }
    let seed = (0..n).map(|_| value(0, r)).collect::<Result<Vec<_>, _>>()?;
    args.push(CTerm::tuple(seed));
    let rhs = CTerm::apps(CTerm::var("v").inst(p), args);
    let c = CTerm::abs(
        "v",
        CTerm::let_pair("x", "y", rhs, CTerm::pair(CTerm::var("x"), CTerm::var("y"))),
    );
    BuiltTerm::finish(c, ty, r * n, StyleTag::Circuit)
}

pub fn build_copy(r: usize) -> Result<BuiltTerm, BuildError> {
    build_copy_n(r, 2)
}
