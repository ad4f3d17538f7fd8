//! The four-valued Belnap bilattice, a four-argument majority function over
//! it, its decomposition into two-argument subfunctions, and the compiled
//! combinator with its optimizations.

mod compile;
mod merge;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::table::FunctionTable;

pub use compile::{
    compile_majority, compile_majority_jobs, majority_expression, CompileError, Expr,
    MajorityOptions, VerificationReport,
};
pub use merge::{
    dontcare_restrict, merge_analysis, merge_identity_holds, merge_pairs, MergeOutcome, MergeTriple,
};

/// Encoded as radix-4 values in information order: `⊥ < f, t < ⊤`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum B4 {
    Bot,
    F,
    T,
    Top,
}

impl B4 {
    pub const ALL: [B4; 4] = [B4::Bot, B4::F, B4::T, B4::Top];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<B4> {
        B4::ALL.get(i).copied()
    }

    fn of(i: usize) -> B4 {
        B4::from_index(i).expect("radix-4 value")
    }
}

impl fmt::Display for B4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            B4::Bot => "⊥",
            B4::F => "f",
            B4::T => "t",
            B4::Top => "⊤",
        })
    }
}

fn load(src: &str) -> FunctionTable {
    FunctionTable::from_json(src).expect("bundled table is well formed")
}

/// Applies a 4×4 table to two bilattice values.
pub fn apply(op: &FunctionTable, a: B4, b: B4) -> B4 {
    B4::of(op.get(&[a.index(), b.index()]))
}

/// Join and meet of the information order (`⊕`, `⊗`) and of the truth
/// order (`∨`, `∧`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BelnapTables {
    pub oplus: FunctionTable,
    pub otimes: FunctionTable,
    pub vee: FunctionTable,
    pub wedge: FunctionTable,
}

impl BelnapTables {
    pub fn load() -> BelnapTables {
        BelnapTables {
            oplus: load(include_str!("../../data/belnap/oplus.json")),
            otimes: load(include_str!("../../data/belnap/otimes.json")),
            vee: load(include_str!("../../data/belnap/vee.json")),
            wedge: load(include_str!("../../data/belnap/wedge.json")),
        }
    }
}

/// `f_i(x1, x2) ⊗ g_i(x3, x4)`, one summand of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionPair {
    pub index: usize,
    pub f: FunctionTable,
    pub g: FunctionTable,
}

const F_SRC: [&str; 7] = [
    include_str!("../../data/belnap/f1.json"),
    include_str!("../../data/belnap/f2.json"),
    include_str!("../../data/belnap/f3.json"),
    include_str!("../../data/belnap/f4.json"),
    include_str!("../../data/belnap/f5.json"),
    include_str!("../../data/belnap/f6.json"),
    include_str!("../../data/belnap/f7.json"),
];

const G_SRC: [&str; 7] = [
    include_str!("../../data/belnap/g1.json"),
    include_str!("../../data/belnap/g2.json"),
    include_str!("../../data/belnap/g3.json"),
    include_str!("../../data/belnap/g4.json"),
    include_str!("../../data/belnap/g5.json"),
    include_str!("../../data/belnap/g6.json"),
    include_str!("../../data/belnap/g7.json"),
];

/// The seven pairs, indexed from 1.
pub fn decomposition() -> Vec<DecompositionPair> {
    (0..7)
        .map(|k| DecompositionPair {
            index: k + 1,
            f: load(F_SRC[k]),
            g: load(G_SRC[k]),
        })
        .collect()
}

pub fn pair(i: usize) -> Option<DecompositionPair> {
    (1..=7)
        .contains(&i)
        .then(|| decomposition().swap_remove(i - 1))
}

/// Any `⊤` wins; then three or more `t` give `t`; three or more `⊥` give
/// `⊥`; everything else is `f`.
pub fn majority_oracle(x: [B4; 4]) -> B4 {
    let count = |v: B4| x.iter().filter(|&&y| y == v).count();
    if count(B4::Top) > 0 {
        B4::Top
    } else if count(B4::T) >= 3 {
        B4::T
    } else if count(B4::Bot) >= 3 {
        B4::Bot
    } else {
        B4::F
    }
}

/// The oracle as a table over radix 4.
pub fn majority_table() -> FunctionTable {
    FunctionTable::from_fn(vec![4; 4], 4, |u| {
        majority_oracle([B4::of(u[0]), B4::of(u[1]), B4::of(u[2]), B4::of(u[3])]).index()
    })
    .expect("valid shape")
}

/// The bundled majority table file.
pub fn majority_table_file() -> FunctionTable {
    load(include_str!("../../data/belnap/majority.json"))
}

/// `⊕_i f_i(x1, x2) ⊗ g_i(x3, x4)` evaluated on tables.
pub fn eval_decomposition(x: [B4; 4]) -> B4 {
    let t = BelnapTables::load();
    decomposition().iter().fold(B4::Bot, |acc, p| {
        let prod = apply(&t.otimes, apply(&p.f, x[0], x[1]), apply(&p.g, x[2], x[3]));
        apply(&t.oplus, acc, prod)
    })
}

/// Every element of `B4^4` in table order.
pub fn all_inputs() -> impl Iterator<Item = [B4; 4]> {
    (0..256).map(|k| {
        [
            B4::of(k >> 6 & 3),
            B4::of(k >> 4 & 3),
            B4::of(k >> 2 & 3),
            B4::of(k & 3),
        ]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(i: usize) -> B4 {
        B4::of(i)
    }

    #[test]
    fn lattice_laws() {
        let t = BelnapTables::load();
        for (join, meet, bot, top) in [
            (&t.oplus, &t.otimes, B4::Bot, B4::Top),
            (&t.vee, &t.wedge, B4::F, B4::T),
        ] {
            for x in B4::ALL {
                assert_eq!(apply(join, x, bot), x);
                assert_eq!(apply(meet, x, top), x);
                assert_eq!(apply(join, x, x), x);
                assert_eq!(apply(meet, x, x), x);
                for y in B4::ALL {
                    assert_eq!(apply(join, x, y), apply(join, y, x));
                    assert_eq!(apply(meet, x, y), apply(meet, y, x));
                    assert_eq!(apply(join, x, apply(meet, x, y)), x);
                    assert_eq!(apply(meet, x, apply(join, x, y)), x);
                    for z in B4::ALL {
                        assert_eq!(
                            apply(join, apply(join, x, y), z),
                            apply(join, x, apply(join, y, z))
                        );
                        assert_eq!(
                            apply(meet, apply(meet, x, y), z),
                            apply(meet, x, apply(meet, y, z))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        use B4::*;
        assert_eq!(majority_oracle([Top, Bot, Bot, Bot]), Top);
        assert_eq!(majority_oracle([T, T, T, F]), T);
        assert_eq!(majority_oracle([Bot, Bot, T, T]), F);
        assert_eq!(majority_table(), majority_table_file());
    }

    #[test]
    fn decomposition_matches_oracle() {
        for x in all_inputs() {
            assert_eq!(eval_decomposition(x), majority_oracle(x), "{x:?}");
        }
        assert_eq!(eval_decomposition([b(0); 4]), B4::Bot);
        assert_eq!(eval_decomposition([b(2), b(2), b(1), b(1)]), B4::F);
    }
}
