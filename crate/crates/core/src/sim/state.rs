use std::fmt::Write as _;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dense::{check_cap, CMatrix};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// A `2^n x 2^n` Hermitian matrix of unit trace. Positivity is not enforced:
/// linear-inversion estimates may have small negative eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let dim = m.nrows();
        if dim != m.ncols() || !dim.is_power_of_two() || dim < 2 {
            return Err(Error::contract(format!("{}x{} is not a qubit density matrix", dim, m.ncols())));
        }
        let n = dim.trailing_zeros() as usize;
        check_cap(n)?;
        let herm = crate::dense::max_abs_diff(&m, &m.adjoint());
        if herm > HERMITIAN_TOL {
            return Err(Error::contract(format!("matrix is not Hermitian (deviation {herm:.3e})")));
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::contract(format!("trace {tr} is not 1")));
        }
        Ok(DensityMatrix { n, m })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_cap(n)?;
        let dim = 1usize << n;
        Ok(DensityMatrix {
            n,
            m: CMatrix::identity(dim, dim).unscale(dim as f64),
        })
    }

    /// `|psi><psi|` of a normalised copy of `psi`.
    pub fn from_pure(psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::Singular("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        DensityMatrix::new(&v * v.adjoint())
    }

    /// Computational basis state `|bits>`, qubit 1 the most significant bit.
    pub fn basis(n: usize, bits: usize) -> Result<Self> {
        check_cap(n)?;
        let dim = 1usize << n;
        if bits >= dim {
            return Err(Error::range(format!("basis index {bits} outside {dim}")));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(bits, bits)] = Complex64::new(1.0, 0.0);
        Ok(DensityMatrix { n, m })
    }

    /// Wraps a matrix without checks; used for reconstructed estimates.
    pub(crate) fn from_raw(n: usize, m: CMatrix) -> Self {
        DensityMatrix { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn purity(&self) -> f64 {
        trace_product(&self.m, &self.m)
    }

    /// Smallest eigenvalue of the Hermitian matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.m
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `alpha * self + (1 - alpha) * other`.
    pub fn mix(&self, other: &DensityMatrix, alpha: f64) -> Result<DensityMatrix> {
        if self.n != other.n {
            return Err(Error::contract("mixing states of different sizes"));
        }
        Ok(DensityMatrix {
            n: self.n,
            m: self.m.scale(alpha) + other.m.scale(1.0 - alpha),
        })
    }
}

/// `Re tr(a b)` for Hermitian `a`, `b`.
fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.transpose().iter()).map(|(x, y)| (x * y).re).sum()
}

fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    DVector::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Haar-random pure state drawn from `rng`.
pub fn random_pure_state_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    check_cap(n)?;
    loop {
        let psi = gaussian_vector(1 << n, rng);
        if psi.norm() > 0.0 {
            return DensityMatrix::from_pure(&psi);
        }
    }
}

/// Haar-random pure state, deterministic per seed.
pub fn random_pure_state(n: usize, seed: u64) -> Result<DensityMatrix> {
    random_pure_state_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Mixed state `G G^dagger / tr(G G^dagger)` from a square complex Ginibre
/// matrix `G` (Hilbert-Schmidt measure).
pub fn random_mixed_state_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    check_cap(n)?;
    let dim = 1usize << n;
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let mut m = m.unscale(tr);
    // Symmetrise away rounding so the Hermitian check is exact.
    m = (m.clone() + m.adjoint()).unscale(2.0);
    DensityMatrix::new(m)
}

/// `1 - tr(rho0 rho_e) / sqrt(tr(rho0^2) tr(rho_e^2))`.
pub fn infidelity(rho0: &DensityMatrix, rho_e: &DensityMatrix) -> Result<f64> {
    if rho0.n != rho_e.n {
        return Err(Error::contract(format!(
            "comparing {}-qubit and {}-qubit states",
            rho0.n, rho_e.n
        )));
    }
    let p0 = rho0.purity();
    let pe = rho_e.purity();
    if p0 <= 0.0 || pe <= 0.0 {
        return Err(Error::Singular("state with zero purity".into()));
    }
    Ok(1.0 - trace_product(&rho0.m, &rho_e.m) / (p0 * pe).sqrt())
}

/// State file: `n <count>` header, then one `re im` pair per entry in
/// row-major order.
pub fn save_state(rho: &DensityMatrix) -> String {
    let mut s = format!("n {}\n", rho.n);
    let dim = rho.m.nrows();
    for r in 0..dim {
        for c in 0..dim {
            let z = rho.m[(r, c)];
            writeln!(s, "{:e} {:e}", z.re, z.im).unwrap();
        }
    }
    s
}

pub fn load_state(text: &str) -> Result<DensityMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "missing header `n <count>`"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|_| Error::parse(hl, 3, format!("bad qubit count {count:?}")))?,
        _ => return Err(Error::parse(hl, 1, "expected header `n <count>`")),
    };
    check_cap(n)?;
    let dim = 1usize << n;
    let mut entries = Vec::with_capacity(dim * dim);
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [re, im] = fields.as_slice() else {
            return Err(Error::parse(ln, 1, "expected `re im`"));
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::parse(ln, 1, format!("expected a number, found {s:?}")))
        };
        entries.push(Complex64::new(num(re)?, num(im)?));
    }
    if entries.len() != dim * dim {
        return Err(Error::parse(
            text.lines().count().max(1),
            1,
            format!("expected {} entries, found {}", dim * dim, entries.len()),
        ));
    }
    DensityMatrix::new(CMatrix::from_row_slice(dim, dim, &entries))
}

