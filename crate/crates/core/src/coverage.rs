//! The signed coverage matrix: which Pauli coefficient each setting reads out
//! through each Z-string, and with what sign.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::catalog::SettingCatalog;
use crate::error::{Error, Result};
use crate::gates::{conjugate_setting, MeasurementSetting};
use crate::pauli::{PauliString, Sign};

/// One nonzero of the matrix. `column` is the 0-based Pauli index
/// (`pauli.index() - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverageEntry {
    pub column: u64,
    pub sign: Sign,
}

/// Settings x `4^n` signed sparse matrix. Row `i` holds exactly `2^n`
/// entries, entry `j` coming from the Z-string `O_j` whose qubit-1 bit is the
/// most significant bit of `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageMatrix {
    n: usize,
    labels: Vec<String>,
    rows: Vec<Vec<CoverageEntry>>,
}

/// `O_j` for `j` in `0..2^n`.
pub fn z_operator(n: usize, j: u64) -> PauliString {
    PauliString::z_string(n, j).expect("n within range")
}

/// Row of the coverage matrix for a single setting.
pub fn coverage_row(m: &MeasurementSetting) -> Vec<CoverageEntry> {
    let n = m.n();
    (0..1u64 << n)
        .map(|j| {
            let lambda = conjugate_setting(m, &z_operator(n, j)).expect("dimensions agree");
            CoverageEntry {
                column: lambda.index() - 1,
                sign: lambda.sign(),
            }
        })
        .collect()
}

/// Builds the matrix row by row, in parallel; row order follows the catalog.
pub fn build_coverage(c: &SettingCatalog) -> CoverageMatrix {
    let rows = c.settings().par_iter().map(coverage_row).collect();
    CoverageMatrix {
        n: c.n(),
        labels: c.settings().iter().map(|s| s.label()).collect(),
        rows,
    }
}

impl CoverageMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `4^n`.
    pub fn num_cols(&self) -> u64 {
        1u64 << (2 * self.n)
    }

    pub fn row(&self, i: usize) -> &[CoverageEntry] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<CoverageEntry>] {
        &self.rows
    }

    pub fn row_labels(&self) -> &[String] {
        &self.labels
    }

    /// Unsigned Pauli label of a 0-based column, e.g. `"IXZ"`.
    pub fn column_label(&self, col: u64) -> String {
        PauliString::from_index(self.n, col + 1)
            .expect("column in range")
            .label()
    }

    /// `(row, column, sign)` triples in row-major order of `O_j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u64, Sign)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |e| (i, e.column, e.sign)))
    }

    /// Row restricted to the selected rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<CoverageMatrix> {
        let mut out = CoverageMatrix {
            n: self.n,
            labels: Vec::with_capacity(rows.len()),
            rows: Vec::with_capacity(rows.len()),
        };
        for &r in rows {
            if r >= self.rows.len() {
                return Err(Error::range(format!("row {r} outside matrix of {}", self.rows.len())));
            }
            out.labels.push(self.labels[r].clone());
            out.rows.push(self.rows[r].clone());
        }
        Ok(out)
    }

    /// Dense row over all `4^n` columns with entries in {-1, 0, 1}.
    pub fn dense_row(&self, i: usize) -> Vec<i8> {
        let mut out = vec![0i8; self.num_cols() as usize];
        for e in &self.rows[i] {
            out[e.column as usize] = e.sign.value();
        }
        out
    }

    /// Columns with no nonzero entry in any row.
    pub fn uncovered_columns(&self) -> Vec<u64> {
        let mut hit = vec![false; self.num_cols() as usize];
        for r in &self.rows {
            for e in r {
                hit[e.column as usize] = true;
            }
        }
        (0..self.num_cols()).filter(|&c| !hit[c as usize]).collect()
    }

    /// CSV with a `setting` label column followed by one column per Pauli.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("setting");
        for c in 0..self.num_cols() {
            s.push(',');
            s.push_str(&self.column_label(c));
        }
        s.push('\n');
        for (i, label) in self.labels.iter().enumerate() {
            s.push_str(label);
            for v in self.dense_row(i) {
                write!(s, ",{v}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}
