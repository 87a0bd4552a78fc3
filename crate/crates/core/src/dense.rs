//! Dense complex matrices: the numerical oracle for the symbolic rules and
//! the workhorse of the simulator.
//!
//! Basis states are ordered with qubit 1 as the most significant bit.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{Axis, GateKind, MeasurementSetting, ReadoutGate, Targets};
use crate::pauli::{Pauli, PauliString};

pub type CMatrix = DMatrix<Complex64>;

/// Largest register handled by dense matrices.
pub const ORACLE_CAP: usize = 8;

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n > ORACLE_CAP {
        return Err(Error::Capacity { n, cap: ORACLE_CAP });
    }
    if n == 0 {
        return Err(Error::range("qubit count must be at least 1"));
    }
    Ok(())
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_matrix(p: Pauli) -> CMatrix {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let data = match p {
        Pauli::I => [one, o, o, one],
        Pauli::X => [o, one, one, o],
        Pauli::Y => [o, c(0.0, -1.0), c(0.0, 1.0), o],
        Pauli::Z => [one, o, o, -one],
    };
    CMatrix::from_row_slice(2, 2, &data)
}

/// `exp(-i angle/2 sigma_axis)`.
pub fn rotation(axis: Axis, angle: f64) -> CMatrix {
    let (s, co) = (angle / 2.0).sin_cos();
    let sigma = pauli_matrix(match axis {
        Axis::X => Pauli::X,
        Axis::Y => Pauli::Y,
        Axis::Z => Pauli::Z,
    });
    CMatrix::identity(2, 2).scale(co) - sigma * c(0.0, s)
}

/// `exp(-i angle/2 G)` for an involutory generator `G` (`G^2 = 1`).
pub fn involution_exp(generator: &CMatrix, angle: f64) -> CMatrix {
    let (s, co) = (angle / 2.0).sin_cos();
    let dim = generator.nrows();
    CMatrix::identity(dim, dim).scale(co) - generator * c(0.0, s)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Full-register matrix of a Pauli string, including its sign.
pub fn dense_pauli(p: &PauliString) -> Result<CMatrix> {
    check_cap(p.n())?;
    let mut m = pauli_matrix(p.factor(1));
    for q in 2..=p.n() {
        m = kron(&m, &pauli_matrix(p.factor(q)));
    }
    Ok(m * c(p.sign().as_f64(), 0.0))
}

/// Embeds an operator acting on `qubits` (in the order given, first qubit
/// most significant) into an `n`-qubit register.
pub fn embed(op: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let k = qubits.len();
    debug_assert_eq!(op.nrows(), 1 << k);
    let dim = 1usize << n;
    let target_mask: usize = qubits.iter().map(|&q| 1usize << (n - q)).sum();
    let local = |state: usize| -> usize {
        qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | ((state >> (n - q)) & 1))
    };
    let mut out = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        let rest = row & !target_mask;
        let lr = local(row);
        for lc in 0..(1 << k) {
            let v = op[(lr, lc)];
            if v == c(0.0, 0.0) {
                continue;
            }
            let mut col = rest;
            for (i, &q) in qubits.iter().enumerate() {
                if (lc >> (k - 1 - i)) & 1 == 1 {
                    col |= 1 << (n - q);
                }
            }
            out[(row, col)] = v;
        }
    }
    out
}

/// Local unitary of a gate: 2x2 for single-qubit kinds, 4x4 on the ordered
/// pair for `YY`/`XY`.
pub fn gate_matrix(kind: GateKind) -> CMatrix {
    use std::f64::consts::FRAC_PI_2;
    match kind {
        GateKind::Id => CMatrix::identity(2, 2),
        GateKind::YY => involution_exp(&kron(&pauli_matrix(Pauli::Y), &pauli_matrix(Pauli::Y)), FRAC_PI_2),
        GateKind::XY => involution_exp(&kron(&pauli_matrix(Pauli::X), &pauli_matrix(Pauli::Y)), FRAC_PI_2),
        other => {
            let (axis, angle) = other.rotation().expect("single-qubit rotation");
            rotation(axis, angle)
        }
    }
}

/// Full-register unitary of a single gate.
pub fn gate_unitary(g: &ReadoutGate, n: usize) -> Result<CMatrix> {
    check_cap(n)?;
    Ok(embed(&gate_matrix(g.kind()), &g.qubits(), n))
}

/// Unitary of a complete measurement setting.
pub fn setting_unitary(m: &MeasurementSetting) -> Result<CMatrix> {
    let n = m.n();
    check_cap(n)?;
    let mut u = CMatrix::identity(1 << n, 1 << n);
    for g in m.gates() {
        if let (GateKind::Id, Targets::One(_)) = (g.kind(), g.targets()) {
            continue;
        }
        u = gate_unitary(g, n)? * u;
    }
    Ok(u)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Rescales `m` so its first nonzero entry is real and positive.
fn phase_normalized(m: &CMatrix) -> CMatrix {
    let pivot = m
        .iter()
        .find(|z| z.norm() > 1e-9)
        .copied()
        .unwrap_or(c(1.0, 0.0));
    let phase = pivot / pivot.norm();
    m / phase
}

/// Distance between two matrices after removing a global phase from each,
/// fixed by making the first nonzero entry real and positive.
pub fn diff_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs_diff(&phase_normalized(a), &phase_normalized(b))
}

/// Expansion coefficient `Tr(P m) / 2^n` when `m` is (numerically) a signed
/// multiple of a single Pauli string. Returns the matching string, or `None`
/// if no basis element carries all of the weight.
pub fn decompose_single_pauli(m: &CMatrix, n: usize, tol: f64) -> Option<PauliString> {
    let dim = (1usize << n) as f64;
    for idx in 1..=(1u64 << (2 * n)) {
        let p = PauliString::from_index(n, idx).ok()?;
        let pm = dense_pauli(&p).ok()?;
        let coeff = (pm * m).trace() / dim;
        if (coeff.norm() - 1.0).abs() < tol {
            if coeff.im.abs() > tol {
                return None;
            }
            let signed = if coeff.re > 0.0 {
                p
            } else {
                p.with_sign(crate::pauli::Sign::Minus)
            };
            return Some(signed);
        }
    }
    None
}
