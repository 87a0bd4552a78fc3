use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::measure::MeasurementRecord;
use super::plan::TomographyPlan;
use super::state::DensityMatrix;
use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub const RECORDS_FORMAT: &str = "tomoplan-records/1";

/// Tolerance on `|<O_j>| <= 1` and `<O_1> = 1` for supplied records.
const EXPECTATION_TOL: f64 = 1e-6;

/// Reverses the low `n` bits: Pauli masks keep qubit 1 in bit 0, basis
/// indices keep it in the most significant bit.
fn to_basis_mask(mask: u64, n: usize) -> usize {
    (mask.reverse_bits() >> (64 - n)) as usize
}

/// Adds `coef * P` to `rho`, touching only the `2^n` nonzeros of `P`.
fn add_pauli(rho: &mut CMatrix, p: &PauliString, coef: f64) {
    let n = p.n();
    let x = to_basis_mask(p.x_bits(), n);
    let z = to_basis_mask(p.z_bits(), n);
    // Y = i X Z on each qubit.
    let y_phase = match (x & z).count_ones() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let base = y_phase * coef * p.sign().as_f64();
    for b in 0..1usize << n {
        let v = if (b & z).count_ones() % 2 == 1 { -base } else { base };
        rho[(b ^ x, b)] += v;
    }
}

/// `sum_i mu_i P_i` over the `4^n` unsigned Pauli strings in index order.
pub fn density_from_coefficients(n: usize, mu: &[f64]) -> Result<CMatrix> {
    crate::dense::check_cap(n)?;
    if mu.len() != 1 << (2 * n) {
        return Err(Error::contract(format!("expected {} coefficients, got {}", 1u64 << (2 * n), mu.len())));
    }
    let dim = 1usize << n;
    let mut rho = CMatrix::zeros(dim, dim);
    for (i, &c) in mu.iter().enumerate() {
        if c != 0.0 {
            add_pauli(&mut rho, &PauliString::from_index(n, i as u64 + 1)?, c);
        }
    }
    Ok(rho)
}

/// Linear-inversion estimate from one or more records per plan setting.
///
/// Each `(setting, O_j)` pair contributes `sign <O_j> / 2^n` to the
/// coefficient it reads; repeated coefficients are averaged. The identity
/// coefficient is fixed to `1 / 2^n`.
pub fn reconstruct(plan: &TomographyPlan, records: &[MeasurementRecord]) -> Result<(DensityMatrix, Vec<f64>)> {
    let n = plan.n();
    let dim = 1usize << n;
    let mut present = vec![false; plan.len()];
    for r in records {
        if r.setting >= plan.len() {
            return Err(Error::range(format!(
                "record for setting {} but the plan has {}",
                r.setting,
                plan.len()
            )));
        }
        if r.expectations.len() != dim {
            return Err(Error::contract(format!(
                "record for setting {} has {} expectations, expected {dim}",
                r.setting,
                r.expectations.len()
            )));
        }
        present[r.setting] = true;
    }
    let missing: Vec<usize> = (0..plan.len()).filter(|&i| !present[i]).collect();
    if !missing.is_empty() {
        return Err(Error::MissingRecords { settings: missing });
    }

    let cols = dim * dim;
    let mut sum = vec![0.0; cols];
    let mut count = vec![0u32; cols];
    let scale = 1.0 / dim as f64;
    for r in records {
        for (e, &v) in plan.map()[r.setting].iter().zip(&r.expectations) {
            sum[e.column as usize] += e.sign.as_f64() * v * scale;
            count[e.column as usize] += 1;
        }
    }
    let missing: Vec<usize> = (0..cols).filter(|&c| count[c] == 0).map(|c| c + 1).collect();
    if !missing.is_empty() {
        return Err(Error::Reconstruction { missing });
    }
    let mut mu: Vec<f64> = sum.iter().zip(&count).map(|(s, &k)| s / k as f64).collect();
    mu[0] = scale;
    let rho = density_from_coefficients(n, &mu)?;
    Ok((DensityMatrix::from_raw(n, rho), mu))
}

#[derive(Serialize, Deserialize)]
struct RecordLine {
    setting: usize,
    expectations: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shots: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RecordsFile {
    format: String,
    n: usize,
    records: Vec<RecordLine>,
}

pub fn save_records(n: usize, records: &[MeasurementRecord]) -> String {
    let mut out = format!("{{\n  \"format\": \"{RECORDS_FORMAT}\",\n  \"n\": {n},\n  \"records\": [\n");
    let lines: Vec<String> = records
        .iter()
        .map(|r| {
            let line = RecordLine {
                setting: r.setting,
                expectations: r.expectations.clone(),
                shots: r.shots,
            };
            format!("    {}", serde_json::to_string(&line).expect("record serialises"))
        })
        .collect();
    out.push_str(&lines.join(",\n"));
    if !lines.is_empty() {
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parses a records file, checking `<O_1> = 1` and `|<O_j>| <= 1`.
pub fn load_records(text: &str) -> Result<(usize, Vec<MeasurementRecord>)> {
    let file: RecordsFile = serde_json::from_str(text)?;
    if file.format != RECORDS_FORMAT {
        return Err(Error::parse(1, 1, format!("unsupported format {:?}", file.format)));
    }
    crate::dense::check_cap(file.n)?;
    let dim = 1usize << file.n;
    let mut out = Vec::with_capacity(file.records.len());
    for (i, r) in file.records.into_iter().enumerate() {
        if r.expectations.len() != dim {
            return Err(Error::contract(format!(
                "record {i} has {} expectations, expected {dim}",
                r.expectations.len()
            )));
        }
        if (r.expectations[0] - 1.0).abs() > EXPECTATION_TOL
            || r.expectations.iter().any(|v| !v.is_finite() || v.abs() > 1.0 + EXPECTATION_TOL)
        {
            return Err(Error::range(format!("record {i} has expectations outside [-1, 1]")));
        }
        out.push(MeasurementRecord {
            setting: r.setting,
            expectations: r.expectations,
            shots: r.shots,
        });
    }
    Ok((file.n, out))
}
