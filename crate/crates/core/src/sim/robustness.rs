use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::measure::measure_setting;
use super::noise::NoiseModel;
use super::plan::TomographyPlan;
use super::reconstruct::reconstruct;
use super::state::{infidelity, random_mixed_state_with, random_pure_state_with, DensityMatrix};
use crate::error::{Error, Result};
use crate::graph::ConnectivityGraph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StateEnsemble {
    /// Haar-random pure states.
    #[default]
    Pure,
    /// Hilbert-Schmidt random mixed states.
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessConfig {
    pub eta_grid: Vec<f64>,
    pub zeta_grid: Vec<f64>,
    pub num_states: usize,
    pub seed: u64,
    pub shots: Option<u64>,
    pub ensemble: StateEnsemble,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessRow {
    pub scheme: String,
    pub eta: f64,
    pub zeta: f64,
    pub mean_infidelity: f64,
    pub std_error: f64,
    pub num_states: usize,
    pub seed: u64,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Infidelity of one noisy measure/reconstruct pass over `plan`.
fn run_once(rho: &DensityMatrix, plan: &TomographyPlan, noise: &NoiseModel, shots: Option<u64>, rng: &mut ChaCha8Rng) -> Result<f64> {
    let records = plan
        .settings()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut r = measure_setting(rho, m, noise, shots, rng)?;
            r.setting = i;
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let (est, _) = reconstruct(plan, &records)?;
    infidelity(rho, &est)
}

/// Mean reconstruction infidelity of each scheme at every `(eta, zeta)`
/// grid point, noise acting on the couplings of `graph`.
///
/// State `i` and its noise draws come from private ChaCha8 streams
/// `2i` and `2i + 1` of `seed`. The noise stream restarts at every grid
/// point and scheme, so all points see the same states and the same
/// underlying uniforms. Rows are ordered by scheme, then `eta`, then `zeta`.
pub fn robustness_experiment(
    graph: &ConnectivityGraph,
    schemes: &[(&str, &TomographyPlan)],
    cfg: &RobustnessConfig,
) -> Result<Vec<RobustnessRow>> {
    if cfg.eta_grid.is_empty() || cfg.zeta_grid.is_empty() {
        return Err(Error::range("noise grids must be nonempty"));
    }
    if cfg.num_states == 0 {
        return Err(Error::range("number of states must be positive"));
    }
    let n = graph.n();
    if let Some((name, _)) = schemes.iter().find(|(_, p)| p.n() != n) {
        return Err(Error::contract(format!("scheme {name} is not for {n} qubits")));
    }
    let mut models = Vec::new();
    for &eta in &cfg.eta_grid {
        for &zeta in &cfg.zeta_grid {
            models.push(NoiseModel::new(eta, zeta, graph)?);
        }
    }

    // per_state[i][s][g]: infidelity of state i, scheme s, grid point g.
    let per_state: Vec<Vec<Vec<f64>>> = (0..cfg.num_states as u64)
        .into_par_iter()
        .map(|i| {
            let mut srng = stream(cfg.seed, 2 * i);
            let rho = match cfg.ensemble {
                StateEnsemble::Pure => random_pure_state_with(n, &mut srng)?,
                StateEnsemble::Mixed => random_mixed_state_with(n, &mut srng)?,
            };
            schemes
                .iter()
                .map(|(_, plan)| {
                    models
                        .iter()
                        .map(|noise| run_once(&rho, plan, noise, cfg.shots, &mut stream(cfg.seed, 2 * i + 1)))
                        .collect::<Result<Vec<f64>>>()
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let count = cfg.num_states as f64;
    let mut rows = Vec::with_capacity(schemes.len() * models.len());
    for (s, (name, _)) in schemes.iter().enumerate() {
        for (g, noise) in models.iter().enumerate() {
            let mean = per_state.iter().map(|v| v[s][g]).sum::<f64>() / count;
            let std_error = if cfg.num_states > 1 {
                let var = per_state.iter().map(|v| (v[s][g] - mean).powi(2)).sum::<f64>() / (count - 1.0);
                (var / count).sqrt()
            } else {
                0.0
            };
            rows.push(RobustnessRow {
                scheme: name.to_string(),
                eta: noise.eta(),
                zeta: noise.zeta(),
                mean_infidelity: mean,
                std_error,
                num_states: cfg.num_states,
                seed: cfg.seed,
            });
        }
    }
    Ok(rows)
}

pub fn robustness_csv(rows: &[RobustnessRow]) -> String {
    let mut s = String::from("scheme,eta,zeta,mean_infidelity,std_error,num_states,seed\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{:e},{:e},{},{}",
            r.scheme, r.eta, r.zeta, r.mean_infidelity, r.std_error, r.num_states, r.seed
        )
        .unwrap();
    }
    s
}
