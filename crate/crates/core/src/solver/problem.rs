use fixedbitset::FixedBitSet;

use crate::coverage::CoverageMatrix;
use crate::error::{Error, Result};

/// Unsigned set-cover instance: row `r` covers the columns in `support(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverProblem {
    num_cols: usize,
    supports: Vec<Vec<u32>>,
    col_labels: Vec<String>,
}

impl CoverProblem {
    /// Builds an instance with columns labelled by their 0-based index.
    pub fn new(num_cols: usize, supports: Vec<Vec<u32>>) -> Result<Self> {
        let labels = (0..num_cols).map(|c| c.to_string()).collect();
        CoverProblem::with_labels(supports, labels)
    }

    pub fn with_labels(supports: Vec<Vec<u32>>, col_labels: Vec<String>) -> Result<Self> {
        let num_cols = col_labels.len();
        let mut hit = vec![false; num_cols];
        let mut clean = Vec::with_capacity(supports.len());
        for (r, mut s) in supports.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&c) = s.last().filter(|&&c| c as usize >= num_cols) {
                return Err(Error::range(format!("row {r} covers column {c} of {num_cols}")));
            }
            for &c in &s {
                hit[c as usize] = true;
            }
            clean.push(s);
        }
        let uncovered: Vec<String> = (0..num_cols)
            .filter(|&c| !hit[c])
            .map(|c| col_labels[c].clone())
            .collect();
        if !uncovered.is_empty() {
            return Err(Error::Infeasible { uncovered });
        }
        Ok(CoverProblem {
            num_cols,
            supports: clean,
            col_labels,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.supports.len()
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn support(&self, r: usize) -> &[u32] {
        &self.supports[r]
    }

    pub fn supports(&self) -> &[Vec<u32>] {
        &self.supports
    }

    pub fn col_label(&self, c: usize) -> &str {
        &self.col_labels[c]
    }

    pub(crate) fn row_bitsets(&self) -> Vec<FixedBitSet> {
        self.supports
            .iter()
            .map(|s| {
                let mut b = FixedBitSet::with_capacity(self.num_cols);
                for &c in s {
                    b.insert(c as usize);
                }
                b
            })
            .collect()
    }

    /// Columns not covered by the given rows, in ascending order.
    pub fn uncovered_by(&self, rows: &[usize]) -> Result<Vec<usize>> {
        let mut hit = vec![false; self.num_cols];
        for &r in rows {
            let s = self
                .supports
                .get(r)
                .ok_or_else(|| Error::range(format!("row {r} outside problem of {}", self.num_rows())))?;
            for &c in s {
                hit[c as usize] = true;
            }
        }
        Ok((0..self.num_cols).filter(|&c| !hit[c]).collect())
    }

    pub fn is_cover(&self, rows: &[usize]) -> bool {
        matches!(self.uncovered_by(rows), Ok(u) if u.is_empty())
    }
}

/// Drops signs from a coverage matrix. Fails if some Pauli is never covered.
pub fn make_problem(m: &CoverageMatrix) -> Result<CoverProblem> {
    let supports = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.column as u32).collect())
        .collect();
    let labels = (0..m.num_cols()).map(|c| m.column_label(c)).collect();
    CoverProblem::with_labels(supports, labels)
}

/// Result of checking a selection against a coverage matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub complete: bool,
    pub uncovered: Vec<String>,
}

/// Checks whether the selected rows of `m` cover every Pauli.
pub fn verify_cover(m: &CoverageMatrix, selected: &[usize]) -> Result<CoverReport> {
    let mut hit = vec![false; m.num_cols() as usize];
    for &r in selected {
        if r >= m.num_rows() {
            return Err(Error::range(format!("row {r} outside matrix of {}", m.num_rows())));
        }
        for e in m.row(r) {
            hit[e.column as usize] = true;
        }
    }
    let uncovered: Vec<String> = (0..m.num_cols())
        .filter(|&c| !hit[c as usize])
        .map(|c| m.column_label(c))
        .collect();
    Ok(CoverReport {
        complete: uncovered.is_empty(),
        uncovered,
    })
}
