use serde::Serialize;

use super::{all_inputs, apply, pair, BelnapTables, B4};
use crate::table::FunctionTable;

/// Two summands `f_i⊗g_i ⊕ f_j⊗g_j` folded into `h0(f0(x1,x2), g0(x3,x4))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeTriple {
    pub i: usize,
    pub j: usize,
    pub f0: FunctionTable,
    pub g0: FunctionTable,
    pub h0: FunctionTable,
    /// `g_i = theta1 ∘ g0`, indexed by encoded value.
    pub theta1: [B4; 4],
    /// `g_j = theta2 ∘ g0`.
    pub theta2: [B4; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MergeOutcome {
    Merged(MergeTriple),
    /// A remapping exists but is not the single `t ↦ f` shape handled here.
    Unsupported {
        reason: String,
    },
    NotMergeable {
        reason: String,
    },
}

const IDENTITY: [B4; 4] = B4::ALL;
const T_TO_F: [B4; 4] = [B4::Bot, B4::F, B4::F, B4::Top];

fn image(t: &FunctionTable) -> Vec<B4> {
    let mut v: Vec<B4> = t.entries().iter().map(|&e| B4::ALL[e]).collect();
    v.sort();
    v.dedup();
    v
}

/// `θ` with `to = θ ∘ from`, identity off the image of `from`.
fn factor(from: &FunctionTable, to: &FunctionTable) -> Option<[B4; 4]> {
    let mut theta: [Option<B4>; 4] = [None; 4];
    for (&a, &b) in from.entries().iter().zip(to.entries()) {
        match theta[a] {
            Some(prev) if prev != B4::ALL[b] => return None,
            _ => theta[a] = Some(B4::ALL[b]),
        }
    }
    let mut out = IDENTITY;
    for (k, t) in theta.iter().enumerate() {
        if let Some(v) = t {
            out[k] = *v;
        }
    }
    Some(out)
}

fn supported(theta: &[B4; 4], img: &[B4]) -> bool {
    [IDENTITY, T_TO_F]
        .iter()
        .any(|shape| img.iter().all(|&x| theta[x.index()] == shape[x.index()]))
}

pub fn merge_analysis(i: usize, j: usize) -> MergeOutcome {
    let no = |reason: String| MergeOutcome::NotMergeable { reason };
    let (Some(pi), Some(pj)) = (pair(i), pair(j)) else {
        return no(format!("pairs are numbered 1..=7, got ({i}, {j})"));
    };
    if i == j {
        return no("a pair cannot be merged with itself".into());
    }
    for p in [&pi, &pj] {
        if image(&p.f).iter().any(|v| !matches!(v, B4::Bot | B4::Top)) {
            return no(format!("f{} takes values other than ⊥ and ⊤", p.index));
        }
    }
    let top = B4::Top.index();
    if pi
        .f
        .entries()
        .iter()
        .zip(pj.f.entries())
        .any(|(&a, &b)| a == top && b == top)
    {
        return no(format!("f{i} and f{j} are both ⊤ somewhere"));
    }
    let (g0, theta1, theta2) = if let Some(th) = factor(&pi.g, &pj.g) {
        (pi.g.clone(), IDENTITY, th)
    } else if let Some(th) = factor(&pj.g, &pi.g) {
        (pj.g.clone(), th, IDENTITY)
    } else {
        return no(format!("neither of g{i}, g{j} is a function of the other"));
    };
    let img = image(&g0);
    if !supported(&theta1, &img) || !supported(&theta2, &img) {
        return MergeOutcome::Unsupported {
            reason: format!(
                "mergeable in principle, unsupported shape: g{i} = {} ∘ g0, g{j} = {} ∘ g0",
                show(&theta1),
                show(&theta2)
            ),
        };
    }
    let f0 = FunctionTable::from_fn(vec![4, 4], 4, |u| {
        if pi.f.get(u) == top {
            B4::F.index()
        } else if pj.f.get(u) == top {
            B4::T.index()
        } else {
            B4::Bot.index()
        }
    })
    .expect("valid shape");
    let h0 = FunctionTable::from_fn(vec![4, 4], 4, |u| match B4::ALL[u[0]] {
        B4::Bot => B4::Bot.index(),
        B4::F => theta1[u[1]].index(),
        B4::T => theta2[u[1]].index(),
        B4::Top => B4::Top.index(),
    })
    .expect("valid shape");
    let m = MergeTriple {
        i,
        j,
        f0,
        g0,
        h0,
        theta1,
        theta2,
    };
    debug_assert!(merge_identity_holds(&m));
    MergeOutcome::Merged(m)
}

fn show(theta: &[B4; 4]) -> String {
    let parts: Vec<String> = B4::ALL
        .iter()
        .map(|x| format!("{x}↦{}", theta[x.index()]))
        .collect();
    format!("[{}]", parts.join(" "))
}

pub fn merge_pairs(i: usize, j: usize) -> Option<MergeTriple> {
    match merge_analysis(i, j) {
        MergeOutcome::Merged(m) => Some(m),
        _ => None,
    }
}

/// `h0(f0(x1,x2), g0(x3,x4)) = f_i⊗g_i ⊕ f_j⊗g_j` on all of `B4^4`.
pub fn merge_identity_holds(m: &MergeTriple) -> bool {
    let t = BelnapTables::load();
    let (pi, pj) = (pair(m.i).expect("valid"), pair(m.j).expect("valid"));
    all_inputs().all(|x| {
        let lhs = apply(&m.h0, apply(&m.f0, x[0], x[1]), apply(&m.g0, x[2], x[3]));
        let a = apply(
            &t.otimes,
            apply(&pi.f, x[0], x[1]),
            apply(&pi.g, x[2], x[3]),
        );
        let b = apply(
            &t.otimes,
            apply(&pj.f, x[0], x[1]),
            apply(&pj.g, x[2], x[3]),
        );
        lhs == apply(&t.oplus, a, b)
    })
}

fn nearest(k: usize, allowed: &[usize]) -> usize {
    *allowed
        .iter()
        .min_by_key(|&&a| (a.abs_diff(k), a))
        .expect("nonempty")
}

/// `op` kept on `left × right`; other entries are don't-cares, filled from
/// the nearest admissible column within admissible rows and then by copying
/// the nearest admissible row (ties go to the lower index).
pub fn dontcare_restrict(op: &FunctionTable, left: &[B4], right: &[B4]) -> FunctionTable {
    assert!(
        !left.is_empty() && !right.is_empty(),
        "images must be nonempty"
    );
    let rows: Vec<usize> = B4::ALL
        .iter()
        .filter(|x| left.contains(x))
        .map(|x| x.index())
        .collect();
    let cols: Vec<usize> = B4::ALL
        .iter()
        .filter(|x| right.contains(x))
        .map(|x| x.index())
        .collect();
    FunctionTable::from_fn(vec![4, 4], 4, |u| {
        op.get(&[nearest(u[0], &rows), nearest(u[1], &cols)])
    })
    .expect("valid shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_three_and_four_merge() {
        let m = merge_pairs(3, 4).expect("mergeable");
        assert!(merge_identity_holds(&m));
        assert_eq!(m.theta2, T_TO_F);
        assert_eq!(m.h0.row(0), vec![0; 4]);
        assert_eq!(m.h0.row(3), vec![3; 4]);
        assert_eq!(m.g0, pair(3).unwrap().g);
    }

    #[test]
    fn candidate_survey() {
        assert!(merge_pairs(5, 6).is_some());
        assert!(matches!(
            merge_analysis(5, 7),
            MergeOutcome::Unsupported { .. }
        ));
        assert!(matches!(
            merge_analysis(1, 2),
            MergeOutcome::Unsupported { .. }
        ));
        assert!(matches!(
            merge_analysis(6, 7),
            MergeOutcome::NotMergeable { .. }
        ));
        assert!(matches!(
            merge_analysis(3, 3),
            MergeOutcome::NotMergeable { .. }
        ));
        assert!(matches!(
            merge_analysis(0, 3),
            MergeOutcome::NotMergeable { .. }
        ));
    }

    #[test]
    fn full_images_leave_op_unchanged() {
        let t = BelnapTables::load();
        assert_eq!(dontcare_restrict(&t.otimes, &B4::ALL, &B4::ALL), t.otimes);
        let d = dontcare_restrict(&t.otimes, &[B4::Bot, B4::Top], &[B4::Top]);
        assert_eq!(
            d.entries(),
            &[0, 0, 0, 0, 0, 0, 0, 0, 3, 3, 3, 3, 3, 3, 3, 3]
        );
    }
}
