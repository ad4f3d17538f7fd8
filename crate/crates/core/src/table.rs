use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("table JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("radix must be at least 1 (input {position})")]
    ZeroRadix { position: usize },
    #[error("output radix must be at least 1")]
    ZeroOutput,
    #[error("table has {got} entries, the radix product is {expected}")]
    Length { expected: usize, got: usize },
    #[error("entry {index} is {value}, not below output radix {radix}")]
    EntryRange {
        index: usize,
        value: usize,
        radix: usize,
    },
    #[error("a table needs at least one input")]
    NoInputs,
    #[error("{0}")]
    Shape(String),
}

/// A finite function `{0..r1-1} × … × {0..rn-1} → {0..r'-1}`, stored as a
/// flat vector indexed lexicographically with the first argument most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FunctionTable {
    inputs: Vec<usize>,
    output: usize,
    entries: Vec<usize>,
}

#[derive(Deserialize)]
struct RawTable {
    inputs: Vec<usize>,
    output: usize,
    entries: Vec<usize>,
}

impl<'de> Deserialize<'de> for FunctionTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawTable::deserialize(d)?;
        FunctionTable::new(raw.inputs, raw.output, raw.entries).map_err(serde::de::Error::custom)
    }
}

impl FunctionTable {
    pub fn new(inputs: Vec<usize>, output: usize, entries: Vec<usize>) -> Result<Self, TableError> {
        if inputs.is_empty() {
            return Err(TableError::NoInputs);
        }
        if let Some(position) = inputs.iter().position(|&r| r == 0) {
            return Err(TableError::ZeroRadix { position });
        }
        if output == 0 {
            return Err(TableError::ZeroOutput);
        }
        let expected = inputs
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| TableError::Shape("radix product overflows".into()))?;
        if entries.len() != expected {
            return Err(TableError::Length {
                expected,
                got: entries.len(),
            });
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= output) {
            return Err(TableError::EntryRange {
                index,
                value,
                radix: output,
            });
        }
        Ok(FunctionTable {
            inputs,
            output,
            entries,
        })
    }

    pub fn from_fn(
        inputs: Vec<usize>,
        output: usize,
        f: impl Fn(&[usize]) -> usize,
    ) -> Result<Self, TableError> {
        let entries = tuples(&inputs).map(|u| f(&u)).collect();
        FunctionTable::new(inputs, output, entries)
    }

    /// Square table over a uniform radix, given as rows indexed by the first
    /// argument.
    pub fn from_matrix(rows: &[Vec<usize>], radix: usize) -> Result<Self, TableError> {
        if rows.len() != radix || rows.iter().any(|row| row.len() != radix) {
            return Err(TableError::Shape(format!("matrix must be {radix}×{radix}")));
        }
        FunctionTable::new(vec![radix, radix], radix, rows.concat())
    }

    pub fn from_json(src: &str) -> Result<Self, TableError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The common radix when every input and the output share it.
    pub fn uniform_radix(&self) -> Option<usize> {
        let r = self.output;
        self.inputs.iter().all(|&x| x == r).then_some(r)
    }

    pub fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.inputs.len());
        args.iter()
            .zip(&self.inputs)
            .fold(0, |acc, (&a, &r)| acc * r + a)
    }

    pub fn get(&self, args: &[usize]) -> usize {
        self.entries[self.index(args)]
    }

    /// All input tuples in table order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        tuples(&self.inputs)
    }

    /// The table of `(x2..xn) ↦ f(j, x2, …, xn)`.
    pub fn fix_first(&self, j: usize) -> Result<FunctionTable, TableError> {
        if self.arity() < 2 {
            return Err(TableError::Shape("cannot fix the only argument".into()));
        }
        let block = self.len() / self.inputs[0];
        FunctionTable::new(
            self.inputs[1..].to_vec(),
            self.output,
            self.entries[j * block..(j + 1) * block].to_vec(),
        )
    }

    /// Row `i` of a binary table (first argument fixed to `i`).
    pub fn row(&self, i: usize) -> Vec<usize> {
        let w = self.inputs[1];
        self.entries[i * w..(i + 1) * w].to_vec()
    }

    /// Binary table with the arguments swapped.
    pub fn transpose(&self) -> Result<FunctionTable, TableError> {
        if self.arity() != 2 {
            return Err(TableError::Shape("transpose needs a binary table".into()));
        }
        let (a, b) = (self.inputs[0], self.inputs[1]);
        FunctionTable::from_fn(vec![b, a], self.output, |u| self.get(&[u[1], u[0]]))
    }
}

/// Lexicographic enumeration of `{0..r1-1} × … × {0..rn-1}`.
pub fn tuples(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radices.iter().product();
    (0..total).map(move |mut k| {
        let mut u = vec![0; radices.len()];
        for (slot, &r) in u.iter_mut().zip(radices).rev() {
            *slot = k % r;
            k /= r;
        }
        u
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_first_argument_major() {
        let t = FunctionTable::from_fn(vec![2, 3], 4, |u| u[0] + u[1]).unwrap();
        assert_eq!(t.entries(), &[0, 1, 2, 1, 2, 3]);
        assert_eq!(t.get(&[1, 2]), 3);
        assert_eq!(t.fix_first(1).unwrap().entries(), &[1, 2, 3]);
        let tt = t.transpose().unwrap();
        assert_eq!(tt.inputs(), &[3, 2]);
        assert_eq!(tt.get(&[2, 1]), 3);
        assert_eq!(t.tuples().count(), 6);
    }

    #[test]
    fn json_contract() {
        let t = FunctionTable::from_json(r#"{"inputs":[2],"output":2,"entries":[1,0]}"#).unwrap();
        assert_eq!(t.to_json(), r#"{"inputs":[2],"output":2,"entries":[1,0]}"#);
        assert!(FunctionTable::from_json(r#"{"inputs":[2],"output":2,"entries":[1]}"#).is_err());
        assert!(FunctionTable::from_json(r#"{"inputs":[2],"output":2,"entries":[1,2]}"#).is_err());
        assert!(FunctionTable::from_json(r#"{"inputs":[0],"output":2,"entries":[]}"#).is_err());
        assert!(FunctionTable::from_json(r#"{"inputs":[],"output":2,"entries":[0]}"#).is_err());
    }
}
