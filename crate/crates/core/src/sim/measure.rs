use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::noise::{noisy_setting_unitary, NoiseModel};
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates::MeasurementSetting;

/// Expectations `<O_j>` of all `2^n` Z-strings read out by one setting.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    /// Position of the setting in its plan.
    pub setting: usize,
    /// `<O_j>` for `j` in `0..2^n`, qubit 1 the most significant bit of `j`.
    pub expectations: Vec<f64>,
    pub shots: Option<u64>,
}

/// `<O_j> = sum_l (-1)^{popcount(j & l)} p_l` for every `j`: a
/// Walsh-Hadamard transform of the outcome distribution.
pub fn z_expectations(probs: &[f64]) -> Vec<f64> {
    let mut out = probs.to_vec();
    let mut h = 1;
    while h < out.len() {
        for block in out.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        h *= 2;
    }
    out
}

/// Multinomial sample of `shots` outcomes as empirical frequencies.
fn sample_frequencies<R: Rng + ?Sized>(probs: &[f64], shots: u64, rng: &mut R) -> Vec<f64> {
    let mut left = shots;
    let mut mass = 1.0;
    let mut out = vec![0.0; probs.len()];
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        let k = if i + 1 == probs.len() || mass <= p {
            left
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(left, q).expect("valid binomial").sample(rng)
        };
        out[i] = k as f64 / shots as f64;
        left -= k;
        mass -= p;
    }
    out
}

/// Applies the (noisy) readout unitary for `m` to `rho` and returns the
/// Z-string expectations, exact or from `shots` samples.
pub fn measure_setting<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    m: &MeasurementSetting,
    noise: &NoiseModel,
    shots: Option<u64>,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if rho.n() != m.n() {
        return Err(Error::contract(format!(
            "{}-qubit setting on a {}-qubit state",
            m.n(),
            rho.n()
        )));
    }
    if shots == Some(0) {
        return Err(Error::range("shot count must be positive"));
    }
    let u = noisy_setting_unitary(m, noise, rng)?;
    let rotated = &u * rho.matrix() * u.adjoint();
    let mut probs: Vec<f64> = rotated.diagonal().iter().map(|z| z.re.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    if let Some(s) = shots {
        probs = sample_frequencies(&probs, s, rng);
    }
    Ok(MeasurementRecord {
        setting: 0,
        expectations: z_expectations(&probs),
        shots,
    })
}
