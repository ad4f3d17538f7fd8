//! Exhaustive adequacy sweeps: evaluate a term on every input tuple of a
//! table and compare. Parallel across tuples; results are collected in table
//! order so reports do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::BuiltTerm;
use crate::reduce::{eval_applied, EvalError, StepCount, DEFAULT_FUEL};
use crate::syntax::Term;
use crate::table::FunctionTable;

/// Builder terms nest deeply; evaluation recurses on term structure.
pub const WORKER_STACK: usize = 256 << 20;

/// Outcome of evaluating one input tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub input: Vec<usize>,
    pub expected: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub got: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub steps: StepCount,
}

impl Evaluation {
    pub fn agrees(&self) -> bool {
        self.got == Some(self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub total: usize,
    pub agreement: usize,
    pub beta1_total: u64,
    pub beta2_total: u64,
    /// The first few disagreements, in table order.
    pub mismatches: Vec<Evaluation>,
}

impl VerifyReport {
    pub const MAX_LISTED: usize = 10;

    pub fn passed(&self) -> bool {
        self.agreement == self.total
    }
}

/// Runs `f` on a pool with `jobs` threads (all cores when `None`) and a
/// stack large enough for deep terms.
pub fn with_pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    let mut b = rayon::ThreadPoolBuilder::new().stack_size(WORKER_STACK);
    if let Some(n) = jobs {
        b = b.num_threads(n.max(1));
    }
    match b.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Runs `f` on a thread with a large stack; for deep single-term work
/// outside a pool.
pub fn with_big_stack<R: Send + 'static>(f: impl FnOnce() -> R + Send + 'static) -> R {
    std::thread::Builder::new()
        .stack_size(WORKER_STACK)
        .spawn(f)
        .expect("spawn worker")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

fn eval_one(term: &Term, table: &FunctionTable, input: Vec<usize>) -> Evaluation {
    let expected = table.get(&input);
    match eval_applied(term, &input, table.inputs(), table.output(), DEFAULT_FUEL) {
        Ok((v, steps)) => Evaluation {
            input,
            expected,
            got: Some(v),
            error: None,
            steps,
        },
        Err(e) => Evaluation {
            input,
            expected,
            got: None,
            error: Some(e.to_string()),
            steps: StepCount::default(),
        },
    }
}

/// Every input tuple of `table`, evaluated in parallel, in table order.
pub fn evaluate_all(term: &Term, table: &FunctionTable, jobs: Option<usize>) -> Vec<Evaluation> {
    let inputs: Vec<Vec<usize>> = table.tuples().collect();
    with_pool(jobs, || {
        inputs
            .into_par_iter()
            .map(|u| eval_one(term, table, u))
            .collect()
    })
}

/// Sequential evaluation, for callers already inside a pool.
pub fn evaluate_all_seq(term: &Term, table: &FunctionTable) -> Vec<Evaluation> {
    table.tuples().map(|u| eval_one(term, table, u)).collect()
}

pub fn summarize(evals: &[Evaluation]) -> VerifyReport {
    let mut r = VerifyReport {
        total: evals.len(),
        agreement: 0,
        beta1_total: 0,
        beta2_total: 0,
        mismatches: Vec::new(),
    };
    for e in evals {
        r.beta1_total += e.steps.beta1;
        r.beta2_total += e.steps.beta2;
        if e.agrees() {
            r.agreement += 1;
        } else if r.mismatches.len() < VerifyReport::MAX_LISTED {
            r.mismatches.push(e.clone());
        }
    }
    r
}

pub fn verify_term(term: &Term, table: &FunctionTable, jobs: Option<usize>) -> VerifyReport {
    summarize(&evaluate_all(term, table, jobs))
}

pub fn verify_built(b: &BuiltTerm, table: &FunctionTable) -> VerifyReport {
    summarize(&evaluate_all_seq(&b.term, table))
}

/// The table a term computes, or the first evaluation error.
pub fn tabulate(
    term: &Term,
    inputs: &[usize],
    output: usize,
) -> Result<FunctionTable, (Vec<usize>, EvalError)> {
    let mut entries = Vec::new();
    for u in crate::table::tuples(inputs) {
        match eval_applied(term, &u, inputs, output, DEFAULT_FUEL) {
            Ok((v, _)) => entries.push(v),
            Err(e) => return Err((u, e)),
        }
    }
    Ok(FunctionTable::new(inputs.to_vec(), output, entries).expect("decoded values are in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{add_mod_table, build_add_mod};

    #[test]
    fn report_is_independent_of_jobs() {
        let t = add_mod_table(4).unwrap();
        let b = build_add_mod(4).unwrap();
        let one = verify_term(&b.term, &t, Some(1));
        let four = verify_term(&b.term, &t, Some(4));
        assert!(one.passed());
        assert_eq!(one, four);
    }

    #[test]
    fn mismatches_are_listed_in_order() {
        let t = add_mod_table(3).unwrap();
        let wrong = FunctionTable::new(vec![3, 3], 3, vec![0; 9]).unwrap();
        let b = build_add_mod(3).unwrap();
        let r = verify_term(&b.term, &wrong, None);
        assert_eq!(r.agreement, 3);
        assert_eq!(r.mismatches[0].input, vec![0, 1]);
        assert_eq!(tabulate(&b.term, &[3, 3], 3).unwrap(), t);
    }
}
