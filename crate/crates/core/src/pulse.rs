//! Pulse-level realisation of the two-qubit readout gates from XX+YY free
//! evolution and single-qubit rotations.
//!
//! With `H = g (XX + YY)` on the pair and `tau * g = pi/8`:
//!
//! ```text
//! YY(k,l) = exp(-i H tau) Ry_k(pi) exp(-i H tau) Ry_k(-pi)
//! XY(k,l) = Rz_k(-pi/2) YY(k,l) Rz_k(pi/2)
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::dense::{self, CMatrix};
use crate::error::{Error, Result};
use crate::gates::{Axis, GateKind, ReadoutGate, Targets};

/// Product of free-evolution time and coupling strength for one segment.
pub const FREE_EVOLUTION_TAU_G: f64 = FRAC_PI_8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseStep {
    /// Evolution under `g (XX + YY)` on the pair for dimensionless time `tau_g`.
    FreeEvolution { pair: (usize, usize), tau_g: f64 },
    /// `exp(-i angle/2 sigma_axis)` on one qubit.
    Rotation { qubit: usize, axis: Axis, angle: f64 },
}

/// Pulse sequence for `YY` or `XY`, in application order.
pub fn compile_two_qubit(g: &ReadoutGate) -> Result<Vec<PulseStep>> {
    let (k, l) = match g.targets() {
        Targets::Pair(k, l) if g.kind().is_two_qubit() => (k, l),
        _ => {
            return Err(Error::contract(format!(
                "{} is not a two-qubit gate",
                g.kind().code()
            )))
        }
    };
    let free = PulseStep::FreeEvolution {
        pair: (k, l),
        tau_g: FREE_EVOLUTION_TAU_G,
    };
    let rot = |axis, angle| PulseStep::Rotation {
        qubit: k,
        axis,
        angle,
    };
    let yy = [rot(Axis::Y, -PI), free, rot(Axis::Y, PI), free];
    Ok(match g.kind() {
        GateKind::YY => yy.to_vec(),
        GateKind::XY => {
            let mut seq = vec![rot(Axis::Z, FRAC_PI_2)];
            seq.extend(yy);
            seq.push(rot(Axis::Z, -FRAC_PI_2));
            seq
        }
        _ => unreachable!(),
    })
}

/// Real symmetric matrix of `XX + YY` on the pair inside an `n`-qubit register.
pub fn exchange_hamiltonian(pair: (usize, usize), n: usize) -> DMatrix<f64> {
    // XX + YY = 2 (|01><10| + |10><01|) on the pair.
    let dim = 1usize << n;
    let bk = 1usize << (n - pair.0);
    let bl = 1usize << (n - pair.1);
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        if ((s & bk) != 0) != ((s & bl) != 0) {
            h[(s ^ bk ^ bl, s)] = 2.0;
        }
    }
    h
}

/// `exp(-i h t)` for a real symmetric `h`.
pub fn evolve(h: &DMatrix<f64>, t: f64) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = eig
        .eigenvalues
        .map(|lambda| Complex64::from_polar(1.0, -lambda * t));
    let vd = &v * CMatrix::from_diagonal(&phases);
    vd * v.transpose()
}

/// Unitary of an ideal pulse step in an `n`-qubit register.
pub fn step_unitary(step: &PulseStep, n: usize) -> Result<CMatrix> {
    dense::check_cap(n)?;
    Ok(match *step {
        PulseStep::Rotation { qubit, axis, angle } => {
            dense::embed(&dense::rotation(axis, angle), &[qubit], n)
        }
        PulseStep::FreeEvolution { pair, tau_g } => evolve(&exchange_hamiltonian(pair, n), tau_g),
    })
}

/// Product of the step unitaries, later steps multiplying on the left.
pub fn sequence_unitary(steps: &[PulseStep], n: usize) -> Result<CMatrix> {
    dense::check_cap(n)?;
    let mut u = CMatrix::identity(1 << n, 1 << n);
    for step in steps {
        u = step_unitary(step, n)? * u;
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{diff_up_to_phase, gate_matrix, max_abs_diff};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_evolution_is_sqrt_iswap() {
        let u = step_unitary(
            &PulseStep::FreeEvolution {
                pair: (1, 2),
                tau_g: FREE_EVOLUTION_TAU_G,
            },
            2,
        )
        .unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let o = c(0.0, 0.0);
        let expected = CMatrix::from_row_slice(
            4,
            4,
            &[
                c(1.0, 0.0), o, o, o,
                o, c(r, 0.0), c(0.0, -r), o,
                o, c(0.0, -r), c(r, 0.0), o,
                o, o, o, c(1.0, 0.0),
            ],
        );
        assert!(max_abs_diff(&u, &expected) < 1e-12);
    }

    #[test]
    fn yy_sequence_shape_and_unitary() {
        let g = ReadoutGate::pair(GateKind::YY, 1, 2).unwrap();
        let seq = compile_two_qubit(&g).unwrap();
        assert_eq!(seq.len(), 4);
        assert!(matches!(seq[0], PulseStep::Rotation { qubit: 1, axis: Axis::Y, angle } if angle == -PI));
        let u = sequence_unitary(&seq, 2).unwrap();
        assert!(diff_up_to_phase(&u, &gate_matrix(GateKind::YY)) < 1e-12);
    }

    #[test]
    fn xy_sequence_unitary() {
        let g = ReadoutGate::pair(GateKind::XY, 1, 2).unwrap();
        let seq = compile_two_qubit(&g).unwrap();
        assert_eq!(seq.len(), 6);
        let u = sequence_unitary(&seq, 2).unwrap();
        assert!(diff_up_to_phase(&u, &gate_matrix(GateKind::XY)) < 1e-12);
    }

    #[test]
    fn free_segments_use_pi_over_eight() {
        for kind in [GateKind::YY, GateKind::XY] {
            let g = ReadoutGate::pair(kind, 2, 3).unwrap();
            for step in compile_two_qubit(&g).unwrap() {
                if let PulseStep::FreeEvolution { tau_g, .. } = step {
                    assert_eq!(tau_g, FRAC_PI_8);
                }
            }
        }
    }

    #[test]
    fn non_adjacent_pair_in_larger_register() {
        let g = ReadoutGate::pair(GateKind::XY, 1, 3).unwrap();
        let u = sequence_unitary(&compile_two_qubit(&g).unwrap(), 3).unwrap();
        let ideal = dense::gate_unitary(&g, 3).unwrap();
        assert!(diff_up_to_phase(&u, &ideal) < 1e-12);
    }

    #[test]
    fn single_qubit_gate_rejected() {
        let g = ReadoutGate::single(GateKind::RotX, 1).unwrap();
        assert!(matches!(compile_two_qubit(&g), Err(Error::Contract(_))));
    }
}
