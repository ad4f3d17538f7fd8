use serde::Serialize;

use crate::syntax::{NodePath, Term};
use crate::types::{Action, Certificate, DomainError};

/// Largest radix for which the r! inhabitants of `T_r` are enumerated.
pub const INHABITANT_GUARD: usize = 6;

fn f_name(k: usize) -> String {
    format!("f{k}")
}

/// `λf_{r-1} … f_0 x. f_{σ0}(f_{σ1}(… (f_{σ(r-1)} x)))`.
fn spine(order: &[usize]) -> Term {
    let r = order.len();
    let body = order.iter().rev().fold(Term::var("x"), |acc, &k| {
        Term::app(Term::var(f_name(k)), acc)
    });
    Term::abss((0..r).rev().map(f_name).chain(["x".to_string()]), body)
}

/// Order of the `f`s (outermost first) in the canonical value `v_i`.
pub fn cyclic_order(i: usize, r: usize) -> Vec<usize> {
    (0..r).map(|k| (i + k) % r).collect()
}

/// The canonical value `v_i` of radix `r`.
pub fn encode_value(i: usize, r: usize) -> Result<Term, DomainError> {
    if r < 1 || i >= r {
        return Err(DomainError(format!("value {i} out of range for radix {r}")));
    }
    Ok(spine(&cyclic_order(i, r)))
}

/// Certificate for a value-shaped term checked at `T_r`.
pub fn value_certificate() -> Certificate {
    let mut c = Certificate::new();
    c.push(NodePath::root(), Action::Gen("'a".into()));
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Decoded {
    Value(usize),
    /// The composition order of the `f`s (outermost first) when it is a
    /// permutation that is not a cyclic shift.
    NonCanonical(Vec<usize>),
    NotValueShaped,
}

/// Classifies `t` as a value of radix `r`.
pub fn decode_value(t: &Term, r: usize) -> Decoded {
    let mut params = Vec::with_capacity(r + 1);
    let mut cur = t;
    for _ in 0..=r {
        match cur {
            Term::Abs(x, b) => {
                params.push(x.as_str());
                cur = b;
            }
            _ => return Decoded::NotValueShaped,
        }
    }
    let x = params[r];
    // params[j] binds f_{r-1-j}; the innermost binder wins on shadowing.
    let index_of = |name: &str| -> Option<usize> {
        if name == x {
            return None;
        }
        params[..r]
            .iter()
            .rposition(|p| *p == name)
            .map(|j| r - 1 - j)
    };
    let mut order = Vec::with_capacity(r);
    loop {
        match cur {
            Term::App(f, a) => match f.as_ref() {
                Term::Var(g) => match index_of(g) {
                    Some(k) => {
                        order.push(k);
                        cur = a;
                    }
                    None => return Decoded::NotValueShaped,
                },
                _ => return Decoded::NotValueShaped,
            },
            Term::Var(y) if y == x => break,
            _ => return Decoded::NotValueShaped,
        }
    }
    let mut seen = vec![false; r];
    if order.len() != r {
        return Decoded::NotValueShaped;
    }
    for &k in &order {
        if std::mem::replace(&mut seen[k], true) {
            return Decoded::NotValueShaped;
        }
    }
    if order == cyclic_order(order[0], r) {
        Decoded::Value(order[0])
    } else {
        Decoded::NonCanonical(order)
    }
}

/// Decodes a right-nested tuple of `n` values.
pub fn decode_tuple(t: &Term, n: usize, r: usize) -> Option<Vec<Decoded>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = t;
    for _ in 1..n {
        match cur {
            Term::Pair(a, b) => {
                out.push(decode_value(a, r));
                cur = b;
            }
            _ => return None,
        }
    }
    out.push(decode_value(cur, r));
    Some(out)
}

/// All permutations of `0..r` in lexicographic order.
pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                go(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; r], &mut out);
    out
}

/// The r! closed normal inhabitants of `T_r`, one per composition order,
/// in lexicographic order of that order.
pub fn enumerate_normal_inhabitants(r: usize) -> Result<Vec<Term>, DomainError> {
    if !(1..=INHABITANT_GUARD).contains(&r) {
        return Err(DomainError(format!(
            "inhabitant enumeration supports radix 1..={INHABITANT_GUARD}, got {r}"
        )));
    }
    Ok(permutations(r).iter().map(|p| spine(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term, print_term};

    #[test]
    fn encodings() {
        assert_eq!(
            print_term(&encode_value(0, 2).unwrap()),
            "fn f1=> fn f0=> fn x=> f0 (f1 x)"
        );
        assert_eq!(
            print_term(&encode_value(1, 2).unwrap()),
            "fn f1=> fn f0=> fn x=> f1 (f0 x)"
        );
        assert_eq!(
            print_term(&encode_value(2, 3).unwrap()),
            "fn f2=> fn f1=> fn f0=> fn x=> f2 (f0 (f1 x))"
        );
        assert!(encode_value(3, 3).is_err());
        assert!(!alpha_eq(
            &encode_value(0, 2).unwrap(),
            &encode_value(1, 2).unwrap()
        ));
    }

    #[test]
    fn decoding() {
        for r in 1..=6 {
            for k in 0..r {
                assert_eq!(
                    decode_value(&encode_value(k, r).unwrap(), r),
                    Decoded::Value(k)
                );
            }
        }
        let t = parse_term("fn a=> fn b=> fn y=> a (b y)").unwrap();
        assert_eq!(decode_value(&t, 2), Decoded::Value(1));
        let t = parse_term("fn f2=> fn f1=> fn f0=> fn x=> f0 (f2 (f1 x))").unwrap();
        assert_eq!(decode_value(&t, 3), Decoded::NonCanonical(vec![0, 2, 1]));
        for bad in [
            "fn f1=> fn f0=> fn x=> f0 (f0 x)",
            "fn f1=> fn f0=> fn x=> f0 x",
            "fn f1=> fn f0=> f0",
            "fn f1=> fn f0=> fn x=> f0 (f1 (x x))",
        ] {
            assert_eq!(
                decode_value(&parse_term(bad).unwrap(), 2),
                Decoded::NotValueShaped,
                "{bad}"
            );
        }
    }

    #[test]
    fn inhabitant_counts() {
        for (r, n) in [(1, 1), (2, 2), (3, 6), (4, 24)] {
            let all = enumerate_normal_inhabitants(r).unwrap();
            assert_eq!(all.len(), n);
            let canon = all
                .iter()
                .filter(|t| matches!(decode_value(t, r), Decoded::Value(_)))
                .count();
            assert_eq!(canon, r);
        }
        assert!(enumerate_normal_inhabitants(7).is_err());
    }
}
