use serde::{Deserialize, Serialize};

use super::built::{BuildError, BuiltTerm, CTerm, StyleTag};
use crate::reduce::{cyclic_order, encode_value};
use crate::table::FunctionTable;
use crate::types::{base_type, DomainError, TypeExpr};

/// One argument slot of a value used as a selector: either a constant
/// combinator or the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Const(usize),
    Ident,
}

/// What a selector with these slots returns for input `j`: the first
/// constant at or after `j`, scanning cyclically upwards; `None` if every
/// slot is the identity (the seed passes through).
pub fn slot_value(slots: &[Slot], j: usize) -> Option<usize> {
    let r = slots.len();
    (0..r).find_map(|k| match slots[(j + k) % r] {
        Slot::Const(c) => Some(c),
        Slot::Ident => None,
    })
}

pub fn const_slots(slots: &[Slot]) -> usize {
    slots.iter().filter(|s| matches!(s, Slot::Const(_))).count()
}

pub(crate) fn check_value(i: usize, r: usize) -> Result<(), DomainError> {
    if r < 1 || i >= r {
        return Err(DomainError(format!("value {i} out of range for radix {r}")));
    }
    Ok(())
}

pub(crate) fn radix_notes(radices: impl IntoIterator<Item = usize>) -> Vec<String> {
    if radices.into_iter().any(|r| r == 1) {
        vec!["radix 1 is degenerate: the domain has a single value".to_string()]
    } else {
        Vec::new()
    }
}

pub(crate) fn ident() -> CTerm {
    CTerm::abs("y", CTerm::var("y"))
}

pub(crate) fn idents(r: usize) -> Vec<CTerm> {
    (0..r).map(|_| ident()).collect()
}

/// `v_i` with the generalization it needs when checked at `T_r`.
pub(crate) fn value(i: usize, r: usize) -> Result<CTerm, DomainError> {
    let v = encode_value(i, r)?;
    Ok(CTerm::lift(v).gen("'a"))
}

pub(crate) fn f_params(r: usize) -> Vec<String> {
    (0..r).rev().map(|k| format!("f{k}")).collect()
}

/// `f_{o0} (f_{o1} (… (f_{o(r-1)} inner)))`.
fn f_chain(order: &[usize], inner: CTerm) -> CTerm {
    order.iter().rev().fold(inner, |acc, &k| {
        CTerm::app(CTerm::var(format!("f{k}")), acc)
    })
}

/// `fn f_{r-1} … f_0 x=> body`, generalized over `'a`.
fn value_lambda(r: usize, body: CTerm) -> CTerm {
    let mut ps = f_params(r);
    ps.push("x".into());
    CTerm::abss(ps, body).gen("'a")
}

fn endo(a: TypeExpr) -> TypeExpr {
    TypeExpr::arrow(a.clone(), a)
}

fn tvar() -> TypeExpr {
    TypeExpr::var("'a")
}

/// `I = fn y=> y` at `∀'a.'a->'a`.
pub fn build_identity() -> Result<BuiltTerm, BuildError> {
    let c = ident().gen("'a");
    let ty = TypeExpr::forall("'a", endo(tvar()));
    BuiltTerm::finish(c, ty, 0, StyleTag::Circuit)
}

/// `const_i = fn h=> fn f.. x=> f_i(… f_{i+r-1}(h I … I x))`.
pub(crate) fn const_term(i: usize, r: usize) -> Result<CTerm, DomainError> {
    check_value(i, r)?;
    let mut args = idents(r);
    args.push(CTerm::var("x"));
    let inner = CTerm::apps(CTerm::var("h").inst(tvar()), args);
    Ok(CTerm::abs(
        "h",
        value_lambda(r, f_chain(&cyclic_order(i, r), inner)),
    ))
}

pub fn build_const_unary(i: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    let t = base_type(r)?;
    BuiltTerm::finish(const_term(i, r)?, endo(t), 1, StyleTag::Circuit)
        .map(|b| b.with_notes(radix_notes([r])))
}

/// `fn h=> h s_{r-1} … s_0 v_0` with `h` instantiated at `T_{r'}`.
pub fn build_unary_slots(
    slots: &[Slot],
    r_in: usize,
    r_out: usize,
) -> Result<BuiltTerm, BuildError> {
    if slots.len() != r_in {
        return Err(BuildError::Arity(format!(
            "{} slots for radix {r_in}",
            slots.len()
        )));
    }
    let t_out = base_type(r_out)?;
    let mut args = Vec::with_capacity(r_in + 1);
    for s in slots.iter().rev() {
        args.push(match *s {
            Slot::Const(c) => const_term(c, r_out)?,
            Slot::Ident => ident(),
        });
    }
    args.push(value(0, r_out)?);
    let c = CTerm::abs("h", CTerm::apps(CTerm::var("h").inst(t_out.clone()), args));
    let ty = TypeExpr::arrow(base_type(r_in)?, t_out);
    BuiltTerm::finish(c, ty, const_slots(slots), StyleTag::Circuit)
        .map(|b| b.with_notes(radix_notes([r_in, r_out])))
}

fn unary_radices(table: &FunctionTable) -> Result<(usize, usize), BuildError> {
    match table.inputs() {
        [r] => Ok((*r, table.output())),
        _ => Err(BuildError::Arity(format!(
            "unary builder needs one input, table has {}",
            table.arity()
        ))),
    }
}

/// Any one-variable function, one constant per input value.
pub fn build_unary(table: &FunctionTable) -> Result<BuiltTerm, BuildError> {
    let (r, r2) = unary_radices(table)?;
    let slots: Vec<Slot> = table.entries().iter().map(|&v| Slot::Const(v)).collect();
    build_unary_slots(&slots, r, r2)
}

/// Literal `C_i^p`: `p` at `i`, 0 elsewhere.
pub fn literal_table(i: usize, p: usize, r: usize) -> Result<FunctionTable, BuildError> {
    check_value(i, r)?;
    check_value(p, r)?;
    Ok(FunctionTable::from_fn(vec![r], r, |u| {
        if u[0] == i {
            p
        } else {
            0
        }
    })?)
}

pub fn build_literal(
    i: usize,
    p: usize,
    r: usize,
    optimize: bool,
) -> Result<BuiltTerm, BuildError> {
    let table = literal_table(i, p, r)?;
    if optimize {
        crate::optimize::build_unary_opt(&table)
    } else {
        build_unary(&table)
    }
}

/// `cyc_i = fn h=> fn f.. x=> h f_{i+r-1} … f_i x`: adds `i` modulo `r`.
pub(crate) fn cyc_term(i: usize, r: usize) -> Result<CTerm, DomainError> {
    check_value(i, r)?;
    let mut args: Vec<CTerm> = (0..r)
        .rev()
        .map(|k| CTerm::var(format!("f{}", (i + k) % r)))
        .collect();
    args.push(CTerm::var("x"));
    Ok(CTerm::abs(
        "h",
        value_lambda(r, CTerm::apps(CTerm::var("h").inst(tvar()), args)),
    ))
}

pub fn build_cyc(i: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    let t = base_type(r)?;
    BuiltTerm::finish(cyc_term(i, r)?, endo(t), 0, StyleTag::Circuit)
}

/// `F v_0 I … I x`: consumes `F : T_r -> T_r` without affecting the result.
fn discard_f(r: usize) -> Result<CTerm, DomainError> {
    let mut args = idents(r);
    args.push(CTerm::var("x"));
    let head = CTerm::app(CTerm::var("F"), value(0, r)?).inst(tvar());
    Ok(CTerm::apps(head, args))
}

/// `const_f_i = fn F=> fn h=> fn f.. x=> f_i(… (h I … I (F v_0 I … I x)))`.
pub(crate) fn const_f_term(i: usize, r: usize) -> Result<CTerm, DomainError> {
    check_value(i, r)?;
    let mut args = idents(r);
    args.push(discard_f(r)?);
    let inner = CTerm::apps(CTerm::var("h").inst(tvar()), args);
    Ok(CTerm::abss(
        ["F", "h"],
        value_lambda(r, f_chain(&cyclic_order(i, r), inner)),
    ))
}

fn lifted_endo(r: usize) -> Result<TypeExpr, DomainError> {
    Ok(endo(endo(base_type(r)?)))
}

pub fn build_const_f(i: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    BuiltTerm::finish(const_f_term(i, r)?, lifted_endo(r)?, 1, StyleTag::Circuit)
}

/// `cyc_f_i = fn F=> fn h=> fn f.. x=> h f_{i+r-1} … f_i (F v_0 I … I x)`.
pub(crate) fn cyc_f_term(i: usize, r: usize) -> Result<CTerm, DomainError> {
    check_value(i, r)?;
    let mut args: Vec<CTerm> = (0..r)
        .rev()
        .map(|k| CTerm::var(format!("f{}", (i + k) % r)))
        .collect();
    args.push(discard_f(r)?);
    Ok(CTerm::abss(
        ["F", "h"],
        value_lambda(r, CTerm::apps(CTerm::var("h").inst(tvar()), args)),
    ))
}

pub fn build_cyc_f(i: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    BuiltTerm::finish(cyc_f_term(i, r)?, lifted_endo(r)?, 1, StyleTag::Circuit)
}

/// `row = fn F=> fn h=> h s_{r-1} … s_0 I (F v_0)` over `const_f` slots.
pub(crate) fn row_term(slots: &[Slot], r: usize) -> Result<CTerm, DomainError> {
    if slots.len() != r {
        return Err(DomainError(format!(
            "row of length {} for radix {r}",
            slots.len()
        )));
    }
    let t_endo = endo(base_type(r)?);
    let mut args = Vec::with_capacity(r + 2);
    for s in slots.iter().rev() {
        args.push(match *s {
            Slot::Const(c) => const_f_term(c, r)?,
            Slot::Ident => ident(),
        });
    }
    args.push(ident());
    args.push(CTerm::app(CTerm::var("F"), value(0, r)?));
    Ok(CTerm::abss(
        ["F", "h"],
        CTerm::apps(CTerm::var("h").inst(t_endo), args),
    ))
}

pub fn build_row_slots(slots: &[Slot], r: usize) -> Result<BuiltTerm, BuildError> {
    BuiltTerm::finish(
        row_term(slots, r)?,
        lifted_endo(r)?,
        const_slots(slots),
        StyleTag::Circuit,
    )
}

pub fn build_row(values: &[usize], r: usize) -> Result<BuiltTerm, BuildError> {
    for &v in values {
        check_value(v, r)?;
    }
    let slots: Vec<Slot> = values.iter().map(|&v| Slot::Const(v)).collect();
    build_row_slots(&slots, r)
}

/// `fn h=> h row_{r-1} … row_0 I`, or with `transposed` the column form
/// `fn x=> fn y=> y row_{r-1} … row_0 I x` where row `j` holds column `j`.
pub fn build_binary_rows(
    rows: &[Vec<Slot>],
    r: usize,
    transposed: bool,
) -> Result<BuiltTerm, BuildError> {
    if rows.len() != r {
        return Err(BuildError::Arity(format!(
            "{} rows for radix {r}",
            rows.len()
        )));
    }
    let t = base_type(r)?;
    let mut args = Vec::with_capacity(r + 1);
    for row in rows.iter().rev() {
        args.push(row_term(row, r)?);
    }
    args.push(ident());
    let sel = if transposed { "y" } else { "h" };
    let body = CTerm::apps(CTerm::var(sel).inst(endo(t.clone())), args);
    let c = if transposed {
        CTerm::abss(["x", "y"], CTerm::app(body, CTerm::var("x")))
    } else {
        CTerm::abs("h", body)
    };
    let count = rows.iter().map(|row| const_slots(row)).sum();
    let ty = TypeExpr::arrows([t.clone(), t.clone()], t);
    BuiltTerm::finish(c, ty, count, StyleTag::Circuit).map(|b| b.with_notes(radix_notes([r])))
}

pub(crate) fn square_radix(table: &FunctionTable) -> Result<usize, BuildError> {
    match (table.arity(), table.uniform_radix()) {
        (2, Some(r)) => Ok(r),
        _ => Err(BuildError::Arity(format!(
            "binary builder needs a square table over one radix, got inputs {:?} -> {}",
            table.inputs(),
            table.output()
        ))),
    }
}

/// Any two-variable function over one radix, one `const_f` per entry.
pub fn build_binary(table: &FunctionTable) -> Result<BuiltTerm, BuildError> {
    let r = square_radix(table)?;
    let rows: Vec<Vec<Slot>> = (0..r)
        .map(|i| table.row(i).into_iter().map(Slot::Const).collect())
        .collect();
    build_binary_rows(&rows, r, false)
}

/// `fn h=> h cyc_f_{r-1} … cyc_f_0 I`: addition modulo `r`.
pub fn build_add_mod(r: usize) -> Result<BuiltTerm, BuildError> {
    let t = base_type(r)?;
    let mut args = Vec::with_capacity(r + 1);
    for i in (0..r).rev() {
        args.push(cyc_f_term(i, r)?);
    }
    args.push(ident());
    let c = CTerm::abs(
        "h",
        CTerm::apps(CTerm::var("h").inst(endo(t.clone())), args),
    );
    let ty = TypeExpr::arrows([t.clone(), t.clone()], t);
    BuiltTerm::finish(c, ty, r, StyleTag::Circuit)
}

pub fn min_table(r: usize) -> Result<FunctionTable, BuildError> {
    Ok(FunctionTable::from_fn(vec![r, r], r, |u| u[0].min(u[1]))?)
}

pub fn max_table(r: usize) -> Result<FunctionTable, BuildError> {
    Ok(FunctionTable::from_fn(vec![r, r], r, |u| u[0].max(u[1]))?)
}

pub fn add_mod_table(r: usize) -> Result<FunctionTable, BuildError> {
    Ok(FunctionTable::from_fn(vec![r, r], r, |u| {
        (u[0] + u[1]) % r
    })?)
}
