use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::merge::{dontcare_restrict, merge_pairs};
use super::{decomposition, majority_table, BelnapTables, B4};
use crate::circuit::{build_binary, compile_circuit, uniform_type, BuildError, BuiltTerm, Node};
use crate::optimize::build_binary_opt;
use crate::table::FunctionTable;
use crate::verify::{evaluate_all, summarize};

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("compiled term has type {0}, expected U(4,4)")]
    Type(String),
    #[error("merge of pairs ({0}, {1}) is not applicable")]
    Merge(usize, usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct MajorityOptions {
    /// Fold pairs (3,4) and (5,6) into `h0(f0, g0)` triples.
    pub merge: bool,
    /// Replace combining operators by don't-care-degenerate tables.
    pub dontcare: bool,
    /// Run-minimize rows and pick the cheaper orientation of every table.
    pub row_opt: bool,
}

impl MajorityOptions {
    /// All eight combinations, plain first.
    pub fn all() -> Vec<MajorityOptions> {
        (0..8)
            .map(|k| MajorityOptions {
                merge: k & 4 != 0,
                dontcare: k & 2 != 0,
                row_opt: k & 1 != 0,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub agreement: usize,
    pub total: usize,
    pub node_count: usize,
    pub const_count: usize,
    pub beta1_total: u64,
    pub beta2_total: u64,
    /// Summands of the outer `⊕` fold.
    pub pair_count: usize,
    /// Two-argument tables applied directly to inputs.
    pub subfunction_count: usize,
    pub options: MajorityOptions,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.agreement == self.total
    }
}

/// A table-level expression over the four inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(usize),
    Op {
        name: String,
        table: FunctionTable,
        args: Box<[Expr; 2]>,
    },
}

impl Expr {
    fn op(name: impl Into<String>, table: FunctionTable, a: Expr, b: Expr) -> Expr {
        Expr::Op {
            name: name.into(),
            table,
            args: Box::new([a, b]),
        }
    }

    pub fn eval(&self, x: &[usize]) -> usize {
        match self {
            Expr::Var(k) => x[*k],
            Expr::Op { table, args, .. } => table.get(&[args[0].eval(x), args[1].eval(x)]),
        }
    }

    /// Values this expression takes over all of `B4^4`.
    pub fn image(&self) -> Vec<B4> {
        let mut seen = [false; 4];
        for u in crate::table::tuples(&[4; 4]) {
            seen[self.eval(&u)] = true;
        }
        B4::ALL.into_iter().filter(|b| seen[b.index()]).collect()
    }

    fn is_leaf_op(&self) -> bool {
        matches!(self, Expr::Op { args, .. } if args.iter().all(|a| matches!(a, Expr::Var(_))))
    }

    pub fn subfunction_count(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            e if e.is_leaf_op() => 1,
            Expr::Op { args, .. } => args.iter().map(Expr::subfunction_count).sum(),
        }
    }

    pub fn op_count(&self) -> usize {
        match self {
            Expr::Var(_) => 0,
            Expr::Op { args, .. } => 1 + args.iter().map(Expr::op_count).sum::<usize>(),
        }
    }

    /// Combining operators narrowed to the argument values they can see.
    fn degenerate(self) -> Expr {
        match self {
            Expr::Var(_) => self,
            e if e.is_leaf_op() => e,
            Expr::Op { name, table, args } => {
                let [a, b] = *args;
                let (a, b) = (a.degenerate(), b.degenerate());
                let table = dontcare_restrict(&table, &a.image(), &b.image());
                Expr::op(format!("{name}'"), table, a, b)
            }
        }
    }

    fn to_node(
        &self,
        row_opt: bool,
        cache: &mut HashMap<Vec<usize>, Arc<BuiltTerm>>,
    ) -> Result<Node, BuildError> {
        match self {
            Expr::Var(k) => Ok(Node::Input(*k)),
            Expr::Op { table, args, .. } => {
                let gate = match cache.get(table.entries()) {
                    Some(g) => Arc::clone(g),
                    None => {
                        let b = if row_opt {
                            build_binary_opt(table)?.0
                        } else {
                            build_binary(table)?
                        };
                        let g = Arc::new(b);
                        cache.insert(table.entries().to_vec(), Arc::clone(&g));
                        g
                    }
                };
                let kids = args
                    .iter()
                    .map(|a| a.to_node(row_opt, cache))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Node::Gate(gate, kids))
            }
        }
    }
}

const MERGES: [(usize, usize); 2] = [(3, 4), (5, 6)];

/// `⊕` folded left over the summands, each `f_i(x1,x2) ⊗ g_i(x3,x4)` or,
/// with merging, `h0(f0(x1,x2), g0(x3,x4))`.
pub fn majority_expression(options: MajorityOptions) -> Result<Expr, CompileError> {
    let t = BelnapTables::load();
    let pairs = decomposition();
    let mut summands = Vec::new();
    let mut k = 0;
    while k < pairs.len() {
        let p = &pairs[k];
        let merged = MERGES.iter().find(|(i, _)| options.merge && *i == p.index);
        if let Some(&(i, j)) = merged {
            let m = merge_pairs(i, j).ok_or(CompileError::Merge(i, j))?;
            summands.push(Expr::op(
                format!("h0[{i},{j}]"),
                m.h0,
                Expr::op(format!("f0[{i},{j}]"), m.f0, Expr::Var(0), Expr::Var(1)),
                Expr::op(format!("g0[{i},{j}]"), m.g0, Expr::Var(2), Expr::Var(3)),
            ));
            k += j - i + 1;
            continue;
        }
        summands.push(Expr::op(
            "⊗",
            t.otimes.clone(),
            Expr::op(
                format!("f{}", p.index),
                p.f.clone(),
                Expr::Var(0),
                Expr::Var(1),
            ),
            Expr::op(
                format!("g{}", p.index),
                p.g.clone(),
                Expr::Var(2),
                Expr::Var(3),
            ),
        ));
        k += 1;
    }
    let mut it = summands.into_iter();
    let first = it.next().expect("seven summands");
    let e = it.fold(first, |acc, s| Expr::op("⊕", t.oplus.clone(), acc, s));
    Ok(if options.dontcare { e.degenerate() } else { e })
}

fn pair_count(e: &Expr) -> usize {
    match e {
        Expr::Op { name, args, .. } if name.starts_with('⊕') => args.iter().map(pair_count).sum(),
        _ => 1,
    }
}

/// Compiles the majority function into one closed term over four radix-4
/// inputs and checks it on all 256 inputs.
pub fn compile_majority(
    options: MajorityOptions,
) -> Result<(BuiltTerm, VerificationReport), CompileError> {
    compile_majority_jobs(options, None)
}

pub fn compile_majority_jobs(
    options: MajorityOptions,
    jobs: Option<usize>,
) -> Result<(BuiltTerm, VerificationReport), CompileError> {
    let e = majority_expression(options)?;
    let mut cache = HashMap::new();
    let root = e.to_node(options.row_opt, &mut cache)?;
    let built = compile_circuit(&root, &[4; 4])?;
    let want = uniform_type(4, 4).map_err(BuildError::from)?;
    if built.declared_type != want {
        return Err(CompileError::Type(built.declared_type.to_string()));
    }
    let s = summarize(&evaluate_all(&built.term, &majority_table(), jobs));
    let report = VerificationReport {
        agreement: s.agreement,
        total: s.total,
        node_count: built.stats.node_count,
        const_count: built.stats.const_count,
        beta1_total: s.beta1_total,
        beta2_total: s.beta2_total,
        pair_count: pair_count(&e),
        subfunction_count: e.subfunction_count(),
        options,
    };
    Ok((built, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belnap::majority_table;

    #[test]
    fn expressions_compute_majority() {
        let want = majority_table();
        for o in MajorityOptions::all() {
            let e = majority_expression(o).unwrap();
            for u in want.tuples() {
                assert_eq!(e.eval(&u), want.get(&u), "{o:?} {u:?}");
            }
        }
        let plain = majority_expression(MajorityOptions::default()).unwrap();
        let merged = majority_expression(MajorityOptions {
            merge: true,
            ..Default::default()
        })
        .unwrap();
        assert_eq!((pair_count(&plain), plain.subfunction_count()), (7, 14));
        assert_eq!((pair_count(&merged), merged.subfunction_count()), (5, 10));
    }
}
