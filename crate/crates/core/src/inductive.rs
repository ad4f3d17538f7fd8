//! Inductive synthesis: recursion on the first argument, with each subtable
//! term lifted so it can sit in a selector slot. No copies are needed. Also
//! hybrid composition of parts built in either style.

use std::sync::Arc;

use crate::circuit::{
    build_conj, build_const_n, build_disj, build_literal, build_unary, compile_circuit, guard,
    radix_notes, uniform, BuildError, BuiltTerm, CTerm, Node, StyleTag, DEFAULT_SIZE_GUARD,
};
use crate::table::FunctionTable;
use crate::types::{arrow_type, base_type, DomainError, TypeExpr};

fn value0(r: usize) -> Result<CTerm, DomainError> {
    let v = crate::reduce::encode_value(0, r)?;
    Ok(CTerm::lift(v).gen("'a"))
}

fn idents(r: usize) -> Vec<CTerm> {
    (0..r).map(|_| CTerm::abs("y", CTerm::var("y"))).collect()
}

fn check_uniform_type(m: &BuiltTerm, n: usize, r: usize) -> Result<TypeExpr, BuildError> {
    let u = arrow_type(n, r)?;
    if m.declared_type != u {
        return Err(BuildError::TypeMismatch(format!(
            "expected a term of type {u}, got {}",
            m.declared_type
        )));
    }
    Ok(u)
}

fn lift_cterm(m: &BuiltTerm, n: usize, r: usize) -> Result<(CTerm, TypeExpr), BuildError> {
    let u = check_uniform_type(m, n, r)?;
    let hs: Vec<String> = (1..=n).map(|k| format!("h{k}")).collect();
    let seeds = (0..n).map(|_| value0(r)).collect::<Result<Vec<_>, _>>()?;
    let discard = CTerm::apps(
        CTerm::apps(CTerm::var("F"), seeds).inst(base_type(r)?),
        idents(r),
    );
    let body = CTerm::app(
        discard,
        CTerm::apps(m.embed_ann(), hs.iter().map(CTerm::var)),
    );
    let mut params = vec!["F".to_string()];
    params.extend(hs);
    Ok((CTerm::abss(params, body), TypeExpr::arrow(u.clone(), u)))
}

/// `M^Fun = fn F h1..hn=> (F v_0 … v_0 I … I) (M h1 … hn)`: ignores its
/// function argument (consumed by the discard gadget) and behaves as `m`.
pub fn lift_fun(m: &BuiltTerm, n: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    let (c, ty) = lift_cterm(m, n, r)?;
    BuiltTerm::finish(c, ty, m.stats.const_count, StyleTag::Inductive)
}

/// Builds `f` by recursion on its first argument:
/// `M_f = fn h=> h M^Fun_{k_{r-1}} … M^Fun_{k_0} const_{n-1,0}` where `k_j`
/// is `f` with the first argument fixed to `j`.
pub fn build_inductive(table: &FunctionTable) -> Result<BuiltTerm, BuildError> {
    build_inductive_guarded(table, DEFAULT_SIZE_GUARD)
}

pub fn build_inductive_guarded(
    table: &FunctionTable,
    limit: usize,
) -> Result<BuiltTerm, BuildError> {
    let r = uniform(table)?;
    guard(table, limit)?;
    Ok(inductive(table, r, 0)?.with_notes(radix_notes([r])))
}

/// As [`build_inductive`] with seed `const_{n-1,seed}`; every seed gives the
/// same function.
pub fn build_inductive_seeded(table: &FunctionTable, seed: usize) -> Result<BuiltTerm, BuildError> {
    let r = uniform(table)?;
    guard(table, DEFAULT_SIZE_GUARD)?;
    inductive(table, r, seed)
}

fn inductive(table: &FunctionTable, r: usize, seed: usize) -> Result<BuiltTerm, BuildError> {
    let n = table.arity();
    if n == 1 {
        return Ok(build_unary(table)?.with_style(StyleTag::Inductive));
    }
    let u = arrow_type(n - 1, r)?;
    let mut args = Vec::with_capacity(r + 1);
    let mut consts = 0;
    for j in (0..r).rev() {
        let sub = inductive(&table.fix_first(j)?, r, seed)?;
        consts += sub.stats.const_count;
        args.push(lift_cterm(&sub, n - 1, r)?.0);
    }
    args.push(build_const_n(n - 1, seed, r)?.embed());
    let body = CTerm::apps(CTerm::var("h").inst(u), args);
    BuiltTerm::finish(
        CTerm::abs("h", body),
        arrow_type(n, r)?,
        consts,
        StyleTag::Inductive,
    )
}

/// Feeds each inner term's result into the matching argument of `outer`.
/// `inners[j].1` lists, for each argument of inner term `j`, the source
/// variable (0-based) it reads; variables read more than once are fanned
/// out with copy combinators.
pub fn hybrid_compose(
    outer: &BuiltTerm,
    inners: &[(BuiltTerm, Vec<usize>)],
    n_inputs: usize,
) -> Result<BuiltTerm, BuildError> {
    let (o_in, _) = outer.signature().ok_or_else(|| {
        BuildError::TypeMismatch(format!("outer term has type {}", outer.declared_type))
    })?;
    if o_in.len() != inners.len() {
        return Err(BuildError::Wiring(format!(
            "outer term takes {} arguments, {} inner terms given",
            o_in.len(),
            inners.len()
        )));
    }
    let mut radices: Vec<Option<usize>> = vec![None; n_inputs];
    let mut kids = Vec::with_capacity(inners.len());
    for (j, (inner, wiring)) in inners.iter().enumerate() {
        let (i_in, _) = inner.signature().ok_or_else(|| {
            BuildError::TypeMismatch(format!("inner term {j} has type {}", inner.declared_type))
        })?;
        if i_in.len() != wiring.len() {
            return Err(BuildError::Wiring(format!(
                "inner term {j} takes {} arguments, wiring lists {}",
                i_in.len(),
                wiring.len()
            )));
        }
        for (&src, &rad) in wiring.iter().zip(&i_in) {
            let slot = radices.get_mut(src).ok_or_else(|| {
                BuildError::Wiring(format!("source variable {src} outside 0..{n_inputs}"))
            })?;
            match *slot {
                Some(prev) if prev != rad => {
                    return Err(BuildError::TypeMismatch(format!(
                        "source variable {src} read at radices {prev} and {rad}"
                    )))
                }
                _ => *slot = Some(rad),
            }
        }
        kids.push(Node::Gate(
            Arc::new(inner.clone()),
            wiring.iter().map(|&k| Node::Input(k)).collect(),
        ));
    }
    let radices = radices
        .into_iter()
        .enumerate()
        .map(|(k, r)| r.ok_or_else(|| BuildError::Wiring(format!("input {k} is never used"))))
        .collect::<Result<Vec<_>, _>>()?;
    let root = Node::Gate(Arc::new(outer.clone()), kids);
    Ok(compile_circuit(&root, &radices)?.with_style(StyleTag::Hybrid))
}

/// Hybrid build of a whole table: a circuit-style selector on the first
/// argument, `⊔_j (C_j^{r-1}(x1) & M_j(x2, …, xn))`, over inductively built
/// subtables `M_j`.
pub fn build_hybrid(table: &FunctionTable) -> Result<BuiltTerm, BuildError> {
    let r = uniform(table)?;
    guard(table, DEFAULT_SIZE_GUARD)?;
    let n = table.arity();
    if n == 1 {
        return Ok(build_unary(table)?.with_style(StyleTag::Hybrid));
    }
    let and = Arc::new(build_conj(2, r)?);
    let mut terms = Vec::with_capacity(r);
    for j in 0..r {
        let lit = Arc::new(build_literal(j, r - 1, r, true)?);
        let sub = Arc::new(inductive(&table.fix_first(j)?, r, 0)?);
        let rest = (1..n).map(Node::Input).collect();
        terms.push(Node::gate(
            &and,
            vec![
                Node::gate(&lit, vec![Node::Input(0)]),
                Node::gate(&sub, rest),
            ],
        ));
    }
    let root = if r == 1 {
        terms.pop().expect("one term")
    } else {
        Node::Gate(Arc::new(build_disj(r, r)?), terms)
    };
    let b = compile_circuit(&root, table.inputs())?;
    Ok(b.with_style(StyleTag::Hybrid).with_notes(radix_notes([r])))
}
