use std::collections::HashMap;
use std::sync::Arc;

use super::basic::{build_literal, build_unary, radix_notes};
use super::built::{BuildError, BuiltTerm, DEFAULT_SIZE_GUARD};
use super::compose::{build_conj, build_disj, compile_circuit, Node};
use crate::table::FunctionTable;

pub(crate) fn uniform(table: &FunctionTable) -> Result<usize, BuildError> {
    table.uniform_radix().ok_or_else(|| {
        BuildError::Arity(format!(
            "expected one radix for all inputs and the output, got {:?} -> {}",
            table.inputs(),
            table.output()
        ))
    })
}

pub(crate) fn guard(table: &FunctionTable, limit: usize) -> Result<(), BuildError> {
    if table.len() > limit {
        return Err(BuildError::SizeGuardExceeded {
            size: table.len(),
            limit,
        });
    }
    Ok(())
}

/// Generalized DNF: `⊔_{r^n}` over the monomials
/// `&_n (C_{u1}^{f(u)} x1) … (C_{un}^{f(u)} xn)`, one per input tuple in
/// table order, each input fanned out by `copy_{r,r^n}`.
pub fn build_dnf(table: &FunctionTable) -> Result<BuiltTerm, BuildError> {
    build_dnf_guarded(table, DEFAULT_SIZE_GUARD)
}

pub fn build_dnf_guarded(table: &FunctionTable, limit: usize) -> Result<BuiltTerm, BuildError> {
    let r = uniform(table)?;
    guard(table, limit)?;
    let n = table.arity();
    let conj = Arc::new(build_conj(n, r)?);
    let disj = Arc::new(build_disj(table.len(), r)?);
    let mut literals: HashMap<(usize, usize), Arc<BuiltTerm>> = HashMap::new();
    let mut monomials = Vec::with_capacity(table.len());
    for u in table.tuples() {
        let p = table.get(&u);
        let mut lits = Vec::with_capacity(n);
        for (k, &i) in u.iter().enumerate() {
            let lit = match literals.get(&(i, p)) {
                Some(l) => Arc::clone(l),
                None => {
                    let l = Arc::new(build_literal(i, p, r, false)?);
                    literals.insert((i, p), Arc::clone(&l));
                    l
                }
            };
            lits.push(Node::Gate(lit, vec![Node::Input(k)]));
        }
        monomials.push(Node::gate(&conj, lits));
    }
    let root = Node::gate(&disj, monomials);
    Ok(compile_circuit(&root, table.inputs())?.with_notes(radix_notes([r])))
}

/// Mixed-radix function: inputs are injected into the common radix
/// `R = max` of all radices, a uniform core is applied (entries outside the
/// source domain map to 0), and the result is converted back down.
pub fn build_hetero(table: &FunctionTable) -> Result<BuiltTerm, BuildError> {
    let notes = radix_notes(table.inputs().iter().copied().chain([table.output()]));
    if table.arity() == 1 {
        return Ok(build_unary(table)?.with_notes(notes));
    }
    let big = table
        .inputs()
        .iter()
        .copied()
        .chain([table.output()])
        .max()
        .expect("nonempty");
    let n = table.arity();
    let core_table = FunctionTable::from_fn(vec![big; n], big, |u| {
        if u.iter().zip(table.inputs()).all(|(&a, &r)| a < r) {
            table.get(u)
        } else {
            0
        }
    })?;
    guard(&core_table, DEFAULT_SIZE_GUARD)?;
    let core = Arc::new(build_dnf(&core_table)?);
    let mut args = Vec::with_capacity(n);
    for (k, &r) in table.inputs().iter().enumerate() {
        if r == big {
            args.push(Node::Input(k));
        } else {
            let inj = FunctionTable::from_fn(vec![r], big, |u| u[0])?;
            args.push(Node::Gate(
                Arc::new(build_unary(&inj)?),
                vec![Node::Input(k)],
            ));
        }
    }
    let mut root = Node::gate(&core, args);
    if table.output() != big {
        let out = table.output();
        let down = FunctionTable::from_fn(vec![big], out, |u| if u[0] < out { u[0] } else { 0 })?;
        root = Node::Gate(Arc::new(build_unary(&down)?), vec![root]);
    }
    Ok(compile_circuit(&root, table.inputs())?.with_notes(notes))
}
