use thiserror::Error;

use super::nbe::{normalize_app, NbeError};
use super::step::StepCount;
use super::values::{decode_value, encode_value, Decoded};
use crate::syntax::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("argument {index} is {value}, outside radix {radix}")]
    ArgumentRange {
        index: usize,
        value: usize,
        radix: usize,
    },
    #[error("result is a non-canonical inhabitant (order {0:?})")]
    NonCanonical(Vec<usize>),
    #[error("result is not a value of radix {radix}: {term}")]
    NotValueShaped { radix: usize, term: String },
    #[error("normalization ran out of fuel ({0} steps)")]
    FuelExhausted(u64),
    #[error("evaluation got stuck: {0}")]
    Stuck(&'static str),
}

impl From<NbeError> for EvalError {
    fn from(e: NbeError) -> Self {
        match e {
            NbeError::FuelExhausted(n) => EvalError::FuelExhausted(n),
            NbeError::Stuck(s) => EvalError::Stuck(s),
        }
    }
}

/// Normal form of `f v_{a1} … v_{an}`.
pub fn normalize_applied(
    f: &Term,
    args: &[usize],
    input_radices: &[usize],
    fuel: u64,
) -> Result<(Term, StepCount), EvalError> {
    if args.len() != input_radices.len() {
        return Err(EvalError::Arity {
            expected: input_radices.len(),
            got: args.len(),
        });
    }
    let mut encoded = Vec::with_capacity(args.len());
    for (index, (&value, &radix)) in args.iter().zip(input_radices).enumerate() {
        let v = encode_value(value, radix).map_err(|_| EvalError::ArgumentRange {
            index,
            value,
            radix,
        })?;
        encoded.push(v);
    }
    let refs: Vec<&Term> = encoded.iter().collect();
    Ok(normalize_app(f, &refs, fuel)?)
}

/// Applies `f` to the encoded arguments, normalizes with β₁/β₂ and decodes
/// the result at `output_radix`.
pub fn eval_applied(
    f: &Term,
    args: &[usize],
    input_radices: &[usize],
    output_radix: usize,
    fuel: u64,
) -> Result<(usize, StepCount), EvalError> {
    let (nf, steps) = normalize_applied(f, args, input_radices, fuel)?;
    match decode_value(&nf, output_radix) {
        Decoded::Value(i) => Ok((i, steps)),
        Decoded::NonCanonical(p) => Err(EvalError::NonCanonical(p)),
        Decoded::NotValueShaped => Err(EvalError::NotValueShaped {
            radix: output_radix,
            term: crate::syntax::print_term(&nf),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::DEFAULT_FUEL;
    use crate::syntax::parse_term;

    #[test]
    fn identity_and_errors() {
        let i = parse_term("fn y=> y").unwrap();
        for k in 0..4 {
            let (v, s) = eval_applied(&i, &[k], &[4], 4, DEFAULT_FUEL).unwrap();
            assert_eq!((v, s.beta1, s.beta2), (k, 1, 0));
        }
        assert!(matches!(
            eval_applied(&i, &[4], &[4], 4, DEFAULT_FUEL),
            Err(EvalError::ArgumentRange { .. })
        ));
        assert!(matches!(
            eval_applied(&i, &[], &[4], 4, DEFAULT_FUEL),
            Err(EvalError::Arity { .. })
        ));
        assert!(matches!(
            eval_applied(&i, &[1], &[3], 2, DEFAULT_FUEL),
            Err(EvalError::NotValueShaped { .. })
        ));
    }
}
