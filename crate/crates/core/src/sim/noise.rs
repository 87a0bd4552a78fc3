use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::Rng;

use crate::dense::{self, check_cap, CMatrix};
use crate::error::{Error, Result};
use crate::gates::{GateKind, MeasurementSetting, Targets};
use crate::graph::ConnectivityGraph;
use crate::pulse::{compile_two_qubit, evolve, exchange_hamiltonian, PulseStep};

/// Default coupling strength in MHz.
pub const DEFAULT_COUPLING_MHZ: f64 = 30.0;

/// Control-error model for the readout pulses.
///
/// * Every single-qubit rotation angle `theta` becomes `theta (1 + s u)`,
///   `u` uniform in `[0, eta]` and `s` a fair random sign, drawn per pulse.
/// * Every free-evolution segment on `(k, l)` also evolves each other
///   coupled pair `e` under `g_e u_e (XX + YY)`, `u_e` uniform in
///   `[0, zeta]`, drawn per segment. The segment lasts `pi / (8 g_kl)`.
///
/// Draws take a unit uniform `v` and scale it by `eta` or `zeta`, and the
/// stream is consumed identically for every parameter value, so runs that
/// differ only in `eta`/`zeta` share their random numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    eta: f64,
    zeta: f64,
    couplings: BTreeMap<(usize, usize), f64>,
}

impl NoiseModel {
    /// Couplings of `DEFAULT_COUPLING_MHZ` on every edge of `graph`.
    pub fn new(eta: f64, zeta: f64, graph: &ConnectivityGraph) -> Result<Self> {
        for (name, v) in [("eta", eta), ("zeta", zeta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::range(format!("{name} must be a finite non-negative number, got {v}")));
            }
        }
        Ok(NoiseModel {
            eta,
            zeta,
            couplings: graph.edges().map(|e| (e, DEFAULT_COUPLING_MHZ)).collect(),
        })
    }

    /// No control errors.
    pub fn ideal(graph: &ConnectivityGraph) -> Self {
        NoiseModel::new(0.0, 0.0, graph).expect("zero noise is valid")
    }

    pub fn with_coupling(mut self, k: usize, l: usize, g: f64) -> Result<Self> {
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::range(format!("coupling g must be positive, got {g}")));
        }
        if k == l {
            return Err(Error::range("coupling needs two distinct qubits"));
        }
        self.couplings.insert((k.min(l), k.max(l)), g);
        Ok(self)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn coupling(&self, k: usize, l: usize) -> Option<f64> {
        self.couplings.get(&(k.min(l), k.max(l))).copied()
    }

    fn noisy_angle<R: Rng + ?Sized>(&self, angle: f64, rng: &mut R) -> f64 {
        let v: f64 = rng.random();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        angle * (1.0 + sign * self.eta * v)
    }

    fn segment<R: Rng + ?Sized>(&self, pair: (usize, usize), tau_g: f64, n: usize, rng: &mut R) -> CMatrix {
        let g_target = self.coupling(pair.0, pair.1).unwrap_or(DEFAULT_COUPLING_MHZ);
        let mut h: DMatrix<f64> = exchange_hamiltonian(pair, n);
        for (&edge, &g) in &self.couplings {
            if edge == (pair.0.min(pair.1), pair.0.max(pair.1)) || edge.1 > n {
                continue;
            }
            let v: f64 = rng.random();
            let u = self.zeta * v;
            if u != 0.0 {
                h += exchange_hamiltonian(edge, n) * (g / g_target * u);
            }
        }
        // H t with t = tau_g / g_target, written in units of g_target.
        evolve(&h, tau_g)
    }
}

/// Unitary actually applied for setting `m` under `noise`, drawing from
/// `rng`. With zero noise this equals [`dense::setting_unitary`].
pub fn noisy_setting_unitary<R: Rng + ?Sized>(m: &MeasurementSetting, noise: &NoiseModel, rng: &mut R) -> Result<CMatrix> {
    let n = m.n();
    check_cap(n)?;
    let dim = 1usize << n;
    let mut u = CMatrix::identity(dim, dim);
    for g in m.gates() {
        match (g.kind(), g.targets()) {
            (GateKind::Id, _) => {}
            (kind, Targets::One(q)) => {
                let (axis, angle) = kind.rotation().expect("single-qubit rotation");
                let angle = noise.noisy_angle(angle, rng);
                u = dense::embed(&dense::rotation(axis, angle), &[q], n) * u;
            }
            (_, Targets::Pair(..)) => {
                for step in compile_two_qubit(g)? {
                    let s = match step {
                        PulseStep::Rotation { qubit, axis, angle } => {
                            let angle = noise.noisy_angle(angle, rng);
                            dense::embed(&dense::rotation(axis, angle), &[qubit], n)
                        }
                        PulseStep::FreeEvolution { pair, tau_g } => noise.segment(pair, tau_g, n, rng),
                    };
                    u = s * u;
                }
            }
        }
    }
    Ok(u)
}
