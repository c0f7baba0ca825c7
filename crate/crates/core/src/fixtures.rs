//! The Cartwright–Steger assignment `x -> r s^-1, y -> r s^2, z -> r^-3 s`,
//! the tabulated Fox derivatives, and comparison against them.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::abelian::{monomial_assignment, AbelianizationMap, UserImages};
use crate::fox::{alexander_matrix, AlexanderMatrix};
use crate::laurent::{LaurentError, Monomial, VarContext};
use crate::matrix::Matrix;
use crate::presentation::cartwright_steger;
use crate::Laurent;

const TABLES_JSON: &str = include_str!("../data/cs_tables.json");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("fixture layout: {0}")]
    Layout(String),
    #[error("fixture entry ({row}, {col}): {source}")]
    Entry { row: usize, col: usize, source: LaurentError<BigInt> },
}

/// Images `(1, -1)`, `(1, 2)`, `(-3, 1)` in the variables `r, s`.
pub fn cs_images() -> UserImages {
    UserImages {
        ctx: VarContext::free(&["r", "s"]),
        images: vec![
            Monomial::from_free(vec![1, -1]),
            Monomial::from_free(vec![1, 2]),
            Monomial::from_free(vec![-3, 1]),
        ],
    }
}

pub fn cs_assignment() -> AbelianizationMap {
    monomial_assignment(&cartwright_steger(), Some(cs_images())).expect("the CS images satisfy every relation")
}

/// The Alexander matrix of the built-in presentation, from Fox calculus.
pub fn cs_alexander_matrix() -> AlexanderMatrix {
    alexander_matrix(&cartwright_steger(), &cs_assignment())
}

/// The tabulated entries, `3 x 12`, rows `x, y, z`.
pub fn table_entries() -> Result<Matrix<Laurent>, FixtureError> {
    let v: serde_json::Value = serde_json::from_str(TABLES_JSON)?;
    let ctx = cs_assignment().context().clone();
    let rows = v["entries"].as_array().ok_or_else(|| FixtureError::Layout("missing entries".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = row.as_array().ok_or_else(|| FixtureError::Layout(format!("row {i} is not an array")))?;
        let mut polys = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            polys.push(Laurent::from_term_list(&ctx, cell).map_err(|source| FixtureError::Entry { row: i, col: j, source })?);
        }
        out.push(polys);
    }
    if out.len() != 3 || out.iter().any(|r| r.len() != 12) {
        return Err(FixtureError::Layout("expected 3 rows of 12 entries".into()));
    }
    Ok(Matrix::from_rows(out))
}

/// The tabulated entries as an Alexander matrix under the CS assignment.
pub fn table_matrix() -> Result<AlexanderMatrix, FixtureError> {
    Ok(AlexanderMatrix::new(cs_assignment(), table_entries()?))
}

/// Adds 1 to the leading coefficient of entry `k` (row-major), or sets it
/// to 1 if it is zero.
pub fn mutate_entry(entries: &Matrix<Laurent>, k: usize) -> Matrix<Laurent> {
    let mut out = entries.clone();
    let (i, j) = (k / entries.cols(), k % entries.cols());
    let p = out.get(i, j).clone();
    let bump = match p.leading_term() {
        Some((m, _)) => Laurent::monomial(p.context(), m.clone(), BigInt::from(1)),
        None => Laurent::one(p.context()),
    };
    out.set(i, j, &p + &bump);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryMismatch {
    pub generator: String,
    /// 1-based relation number.
    pub relation: usize,
    pub computed: String,
    pub expected: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableComparison {
    pub matched: usize,
    pub total: usize,
    pub mismatches: Vec<EntryMismatch>,
}

impl TableComparison {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.matched == self.total
    }
}

/// Entrywise polynomial comparison of `a` against `expected`.
pub fn compare_with_tables(a: &AlexanderMatrix, expected: &Matrix<Laurent>) -> TableComparison {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    let mut mismatches = Vec::new();
    let total = expected.rows() * expected.cols();
    let mut matched = 0;
    for i in 0..expected.rows() {
        for j in 0..expected.cols() {
            let want = expected.get(i, j);
            let got = (i < a.rows() && j < a.cols()).then(|| a.entry(i, j));
            if got == Some(want) {
                matched += 1;
            } else {
                mismatches.push(EntryMismatch {
                    generator: NAMES.get(i).map_or_else(|| i.to_string(), |s| s.to_string()),
                    relation: j + 1,
                    computed: got.map_or_else(|| "missing".into(), |p| p.to_fraction_string()),
                    expected: want.to_fraction_string(),
                });
            }
        }
    }
    TableComparison { matched, total, mismatches }
}

/// Shared variable context `r, s` of the CS ring.
pub fn cs_context() -> Arc<VarContext> {
    cs_assignment().context().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_load() {
        let t = table_entries().unwrap();
        assert_eq!((t.rows(), t.cols()), (3, 12));
        assert!(t.iter().all(|p| !p.is_zero()));
        assert_eq!(t.get(0, 0).to_fraction_string(), "-(r^4*s^2 + r^4 + r^3*s + r^2*s^2 + r^2*s + r*s^2 + s^3)/s^3");
    }

    #[test]
    fn first_derivative_matches_first_table_entry() {
        let a = cs_alexander_matrix();
        let t = table_entries().unwrap();
        assert_eq!(a.entry(0, 0), t.get(0, 0));
    }

    #[test]
    fn mutation_changes_exactly_one_entry() {
        let t = table_entries().unwrap();
        let m = mutate_entry(&t, 5);
        let diff: Vec<usize> = (0..36).filter(|&k| t.get(k / 12, k % 12) != m.get(k / 12, k % 12)).collect();
        assert_eq!(diff, vec![5]);
    }

    #[test]
    fn comparison_names_mismatch() {
        let a = cs_alexander_matrix();
        let c = compare_with_tables(&a, &mutate_entry(a.entries(), 0));
        assert_eq!(c.matched, 35);
        assert_eq!((c.mismatches[0].generator.as_str(), c.mismatches[0].relation), ("x", 1));
    }
}
