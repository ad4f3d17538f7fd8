//! Fewer auxiliary combinators: a constant only where the function value
//! changes, the cheaper of the two argument orders for two-variable tables,
//! and cyclic shifts for modular addition.

use serde::Serialize;

use crate::circuit::{
    build_binary_rows, build_unary_slots, slot_value, square_radix, BuildError, BuiltTerm, Slot,
};
use crate::table::FunctionTable;

pub use crate::circuit::{build_add_mod, build_cyc_f};

/// A minimal slot vector for one row together with the positions each
/// constant is responsible for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotAssignment {
    pub slots: Vec<Slot>,
    /// `covers[k]` lists the inputs answered by the constant in slot `k`
    /// (empty for identity slots).
    pub covers: Vec<Vec<usize>>,
}

impl SlotAssignment {
    pub fn const_count(&self) -> usize {
        self.slots
            .iter()
            .filter(|s| matches!(s, Slot::Const(_)))
            .count()
    }
}

/// Places a constant at the last position of every maximal cyclic run of
/// equal values; a constant row gets a single constant at `r-1`.
pub fn minimize_run_slots(row: &[usize]) -> SlotAssignment {
    let r = row.len();
    let mut slots = vec![Slot::Ident; r];
    for k in 0..r {
        if row[k] != row[(k + 1) % r] {
            slots[k] = Slot::Const(row[k]);
        }
    }
    if r > 0 && slots.iter().all(|s| *s == Slot::Ident) {
        slots[r - 1] = Slot::Const(row[0]);
    }
    let mut covers = vec![Vec::new(); r];
    for j in 0..r {
        if let Some(k) = (0..r)
            .map(|d| (j + d) % r)
            .find(|&k| slots[k] != Slot::Ident)
        {
            covers[k].push(j);
        }
    }
    debug_assert!((0..r).all(|j| slot_value(&slots, j) == Some(row[j])));
    SlotAssignment { slots, covers }
}

/// One-variable function with run-minimized constants.
pub fn build_unary_opt(table: &FunctionTable) -> Result<BuiltTerm, BuildError> {
    let r = match table.inputs() {
        [r] => *r,
        _ => {
            return Err(BuildError::Arity(format!(
                "unary builder needs one input, table has {}",
                table.arity()
            )))
        }
    };
    let a = minimize_run_slots(table.entries());
    build_unary_slots(&a.slots, r, table.output())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Original,
    Transposed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationReport {
    pub original_consts: usize,
    pub transposed_consts: usize,
    pub chosen: Orientation,
}

fn minimized_rows(rows: impl Iterator<Item = Vec<usize>>) -> Vec<Vec<Slot>> {
    rows.map(|row| minimize_run_slots(&row).slots).collect()
}

/// Run-minimized slots per row (`transposed == false`) or per column.
pub fn binary_slot_rows(
    table: &FunctionTable,
    transposed: bool,
) -> Result<Vec<Vec<Slot>>, BuildError> {
    let r = square_radix(table)?;
    Ok(if transposed {
        let t = table.transpose()?;
        minimized_rows((0..r).map(|j| t.row(j)))
    } else {
        minimized_rows((0..r).map(|i| table.row(i)))
    })
}

/// Two-variable function with run-minimized rows, built in whichever
/// argument order needs fewer constants (ties keep the original order).
pub fn build_binary_opt(
    table: &FunctionTable,
) -> Result<(BuiltTerm, OrientationReport), BuildError> {
    let r = square_radix(table)?;
    let orig = binary_slot_rows(table, false)?;
    let trans = binary_slot_rows(table, true)?;
    // Both candidates must denote the table before either is chosen.
    for (k, rows) in [&orig, &trans].into_iter().enumerate() {
        for u in table.tuples() {
            let (row, col) = if k == 0 { (u[0], u[1]) } else { (u[1], u[0]) };
            if slot_value(&rows[row], col) != Some(table.get(&u)) {
                return Err(BuildError::SelfCheck(format!(
                    "{} slot rows disagree with the table at {u:?}",
                    if k == 0 { "original" } else { "transposed" }
                )));
            }
        }
    }
    let count = |rows: &[Vec<Slot>]| -> usize {
        rows.iter()
            .map(|row| crate::circuit::const_slots(row))
            .sum()
    };
    let report = OrientationReport {
        original_consts: count(&orig),
        transposed_consts: count(&trans),
        chosen: if count(&trans) < count(&orig) {
            Orientation::Transposed
        } else {
            Orientation::Original
        },
    };
    let built = match report.chosen {
        Orientation::Original => build_binary_rows(&orig, r, false)?,
        Orientation::Transposed => build_binary_rows(&trans, r, true)?,
    };
    Ok((built, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_on_the_example_row() {
        // 0 0 0 4 0 over radix 5: the run 4,0,1,2 wraps around and ends at 2.
        let a = minimize_run_slots(&[0, 0, 0, 4, 0]);
        assert_eq!(a.const_count(), 2);
        assert_eq!(
            a.slots,
            vec![
                Slot::Ident,
                Slot::Ident,
                Slot::Const(0),
                Slot::Const(4),
                Slot::Ident
            ]
        );
        assert_eq!(a.covers[2], vec![0, 1, 2, 4]);
        assert_eq!(a.covers[3], vec![3]);
    }

    #[test]
    fn constant_row_uses_one_slot() {
        let a = minimize_run_slots(&[2, 2, 2]);
        assert_eq!(a.slots, vec![Slot::Ident, Slot::Ident, Slot::Const(2)]);
        assert_eq!(a.covers[2], vec![0, 1, 2]);
    }

    #[test]
    fn wraparound_run_merges() {
        let a = minimize_run_slots(&[1, 0, 0, 1]);
        assert_eq!(a.const_count(), 2);
        for (j, &v) in [1, 0, 0, 1].iter().enumerate() {
            assert_eq!(slot_value(&a.slots, j), Some(v));
        }
    }
}
