use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tomoplan_core::catalog::{catalog_traditional, load_catalog, load_setting_list, save_catalog, CATALOG_FORMAT};
use tomoplan_core::coverage::{build_coverage, CoverageMatrix};
use tomoplan_core::sim::{
    infidelity, load_plan, load_records, load_state, measure_setting, read_plan, reconstruct, robustness_csv,
    robustness_experiment, save_plan, save_records, save_state, NoiseModel, RobustnessConfig, StateEnsemble,
    TomographyPlan, PLAN_FORMAT,
};
use tomoplan_core::solver::{make_problem, solve_exact, verify_cover, Budget, CoverSolution};
use tomoplan_core::{Error, MeasurementSetting, Provenance, SettingCatalog};

use crate::config::{resolve_graph, Grid, Register, Topology};
use crate::error::Failure;
use crate::output::{emit, read_text};
use crate::{Command, Setup};

const MAX_SIMULATED_QUBITS: usize = 6;

pub fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Catalog { setup, out } => catalog(&setup, out.as_deref()),
        Command::Plan { setup, budget, out } => plan(&setup, budget, out.as_deref()),
        Command::Verify { file, setup } => verify(&file, &setup),
        Command::Export {
            plan,
            setup,
            all,
            budget,
            out,
        } => export(plan.as_deref(), &setup, all, budget, out.as_deref()),
        Command::Simulate {
            setup,
            states,
            eta,
            zeta,
            shots,
            seed,
            budget,
            out,
        } => simulate(&setup, states, eta, zeta, shots, seed, budget, out.as_deref()),
        Command::Measure {
            plan,
            state,
            topology,
            graph,
            eta,
            zeta,
            shots,
            seed,
            out,
        } => measure(&plan, &state, topology.as_deref(), graph, eta, zeta, shots, seed, out.as_deref()),
        Command::Reconstruct {
            plan,
            records,
            reference,
            out,
        } => reconstruct_cmd(&plan, &records, reference.as_deref(), out.as_deref()),
    }
}

/// Summary lines go to stdout when the payload goes to a file, and to
/// stderr when the payload itself is on stdout.
fn note(out: Option<&Path>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn solve(catalog: &SettingCatalog, budget: u64) -> Result<(CoverageMatrix, CoverSolution), Failure> {
    let coverage = build_coverage(catalog);
    let problem = make_problem(&coverage)?;
    let solution = solve_exact(&problem, Budget::nodes(budget))?;
    Ok((coverage, solution))
}

fn catalog(setup: &Setup, out: Option<&Path>) -> Result<(), Failure> {
    let reg = setup.resolve()?;
    let cat = reg.catalog()?;
    emit(out, &save_catalog(&cat))?;
    note(
        out,
        &format!(
            "n={} topology={} catalog={} settings={} hash={}",
            reg.n(),
            reg.topology,
            reg.kind,
            cat.len(),
            cat.content_hash()
        ),
    );
    Ok(())
}

fn plan(setup: &Setup, budget: u64, out: Option<&Path>) -> Result<(), Failure> {
    let reg = setup.resolve()?;
    let cat = reg.catalog()?;
    let (_, sol) = solve(&cat, budget)?;
    let plan = TomographyPlan::from_catalog(&cat, &sol.selected)?;
    if let Some(path) = out {
        emit(Some(path), &save_plan(&plan))?;
    }
    println!(
        "n={} topology={} settings={} status={} lower_bound={}",
        reg.n(),
        reg.topology,
        plan.len(),
        sol.status,
        sol.lower_bound
    );
    Ok(())
}

enum FileKind {
    Plan { hash: String, n: usize, settings: Vec<MeasurementSetting> },
    Catalog(SettingCatalog),
}

fn read_settings_file(path: &Path) -> Result<FileKind, Failure> {
    let text = read_text(path)?;
    if !text.trim_start().starts_with('{') {
        return Ok(FileKind::Catalog(load_setting_list(&text)?));
    }
    let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    match value.get("format").and_then(|f| f.as_str()) {
        Some(PLAN_FORMAT) => {
            let r = read_plan(&text)?;
            Ok(FileKind::Plan {
                hash: r.catalog_hash,
                n: r.n,
                settings: r.settings,
            })
        }
        Some(CATALOG_FORMAT) => Ok(FileKind::Catalog(load_catalog(&text)?)),
        other => Err(Failure::Usage(format!(
            "{}: unrecognised file format {:?}",
            path.display(),
            other.unwrap_or("")
        ))),
    }
}

fn verify(file: &Path, setup: &Setup) -> Result<(), Failure> {
    let (kind, hash, cat) = match read_settings_file(file)? {
        FileKind::Plan { hash, n, settings } => ("plan", hash, SettingCatalog::new(n, settings, Provenance::Custom)?),
        FileKind::Catalog(c) => ("catalog", c.content_hash(), c),
    };
    if setup.names_catalog() {
        let reg = Setup {
            n: setup.n.or(Some(cat.n())),
            topology: setup.topology.clone(),
            graph: setup.graph.clone(),
            catalog: setup.catalog,
        }
        .resolve()?;
        let expected = reg.catalog()?.content_hash();
        if expected != hash {
            return Err(Failure::HashMismatch { file: hash, expected });
        }
    }
    let coverage = build_coverage(&cat);
    let all: Vec<usize> = (0..cat.len()).collect();
    let report = verify_cover(&coverage, &all)?;
    if report.complete {
        println!("n={} {kind} settings={} complete", cat.n(), cat.len());
        Ok(())
    } else {
        println!(
            "n={} {kind} settings={} incomplete uncovered={}",
            cat.n(),
            cat.len(),
            report.uncovered.len()
        );
        Err(Failure::Incomplete {
            uncovered: report.uncovered,
        })
    }
}

fn export(plan: Option<&Path>, setup: &Setup, all: bool, budget: u64, out: Option<&Path>) -> Result<(), Failure> {
    let matrix = match plan {
        Some(path) => {
            if setup.names_catalog() || setup.n.is_some() {
                return Err(Failure::Usage("--plan cannot be combined with catalog options".into()));
            }
            match read_settings_file(path)? {
                FileKind::Plan { n, settings, .. } => build_coverage(&SettingCatalog::new(n, settings, Provenance::Custom)?),
                FileKind::Catalog(c) => build_coverage(&c),
            }
        }
        None => {
            let cat = setup.resolve()?.catalog()?;
            if all {
                build_coverage(&cat)
            } else {
                let (coverage, sol) = solve(&cat, budget)?;
                coverage.select(&sol.selected)?
            }
        }
    };
    emit(out, &matrix.to_csv())?;
    note(
        out,
        &format!("rows={} cols={}", matrix.num_rows(), matrix.num_cols()),
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    setup: &Setup,
    states: usize,
    eta: Grid,
    zeta: Grid,
    shots: Option<u64>,
    seed: u64,
    budget: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let reg: Register = setup.resolve()?;
    if reg.n() > MAX_SIMULATED_QUBITS {
        return Err(Error::Range(format!(
            "simulate supports at most {MAX_SIMULATED_QUBITS} qubits, got {}",
            reg.n()
        ))
        .into());
    }
    let cat = reg.catalog()?;
    let (_, sol) = solve(&cat, budget)?;
    let solved = TomographyPlan::from_catalog(&cat, &sol.selected)?;
    let traditional = TomographyPlan::from_settings(&catalog_traditional(reg.n())?)?;
    let cfg = RobustnessConfig {
        eta_grid: eta.0,
        zeta_grid: zeta.0,
        num_states: states,
        seed,
        shots,
        ensemble: StateEnsemble::Pure,
    };
    let name = reg.kind.to_string();
    let rows = robustness_experiment(&reg.graph, &[(&name, &solved), ("traditional", &traditional)], &cfg)?;
    emit(out, &robustness_csv(&rows))?;

    let points = cfg.eta_grid.len() * cfg.zeta_grid.len();
    for g in 0..points {
        let mut line = format!("eta={} zeta={}", rows[g].eta, rows[g].zeta);
        for s in rows[g..].iter().step_by(points) {
            line.push_str(&format!(" {}={:.3e}", s.scheme, s.mean_infidelity));
        }
        note(out, &line);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn measure(
    plan_path: &Path,
    state_path: &Path,
    topology: Option<&str>,
    graph: Option<PathBuf>,
    eta: f64,
    zeta: f64,
    shots: Option<u64>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let plan = load_plan(&read_text(plan_path)?)?;
    let rho = load_state(&read_text(state_path)?)?;
    if rho.n() != plan.n() {
        return Err(Failure::Usage(format!(
            "state has {} qubits, plan has {}",
            rho.n(),
            plan.n()
        )));
    }
    let randomized = shots.is_some() || eta != 0.0 || zeta != 0.0;
    if randomized && seed.is_none() {
        return Err(Failure::Usage("--seed is required with --shots or nonzero noise".into()));
    }
    let topology: Topology = match (topology, &graph) {
        (Some(t), _) => t.parse()?,
        (None, Some(_)) => Topology::Custom,
        (None, None) => Topology::Complete,
    };
    let g = resolve_graph(Some(plan.n()), &topology, graph.as_deref())?;
    let noise = NoiseModel::new(eta, zeta, &g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
    let records = plan
        .settings()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut r = measure_setting(&rho, m, &noise, shots, &mut rng)?;
            r.setting = i;
            Ok(r)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    emit(out, &save_records(plan.n(), &records))?;
    note(out, &format!("n={} records={}", plan.n(), records.len()));
    Ok(())
}

fn reconstruct_cmd(plan_path: &Path, records_path: &Path, reference: Option<&Path>, out: Option<&Path>) -> Result<(), Failure> {
    let plan = load_plan(&read_text(plan_path)?)?;
    let (n, records) = load_records(&read_text(records_path)?)?;
    if n != plan.n() {
        return Err(Failure::Usage(format!("records are for {n} qubits, plan has {}", plan.n())));
    }
    let (rho, _) = reconstruct(&plan, &records)?;
    emit(out, &save_state(&rho))?;
    if let Some(path) = reference {
        let rho0 = load_state(&read_text(path)?)?;
        if rho0.n() != n {
            return Err(Failure::Usage(format!("reference has {} qubits, plan has {n}", rho0.n())));
        }
        note(out, &format!("infidelity={:e}", infidelity(&rho0, &rho)?));
    }
    Ok(())
}
