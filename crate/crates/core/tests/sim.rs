use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tomoplan_core::catalog::{catalog_new, catalog_traditional};
use tomoplan_core::coverage::z_operator;
use tomoplan_core::dense::{dense_pauli, diff_up_to_phase, max_abs_diff, setting_unitary, CMatrix};
use tomoplan_core::gates::{GateKind, MeasurementSetting};
use tomoplan_core::graph::ConnectivityGraph;
use tomoplan_core::pauli::PauliString;
use tomoplan_core::sim::*;
use tomoplan_core::solver::{make_problem, solve_exact, Budget};
use tomoplan_core::coverage::build_coverage;
use tomoplan_core::{Error, SettingCatalog};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn optimal_plan(g: &ConnectivityGraph) -> TomographyPlan {
    let cat = catalog_new(g).unwrap();
    let sol = solve_exact(&make_problem(&build_coverage(&cat)).unwrap(), Budget::default()).unwrap();
    TomographyPlan::from_catalog(&cat, &sol.selected).unwrap()
}

fn traditional_plan(n: usize) -> TomographyPlan {
    TomographyPlan::from_settings(&catalog_traditional(n).unwrap()).unwrap()
}

fn noiseless_records(rho: &DensityMatrix, plan: &TomographyPlan) -> Vec<MeasurementRecord> {
    let noise = NoiseModel::ideal(&ConnectivityGraph::complete(rho.n()).unwrap());
    plan.settings()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut r = measure_setting(rho, m, &noise, None, &mut rng(0)).unwrap();
            r.setting = i;
            r
        })
        .collect()
}

/// `Tr(U^dagger O_j U rho)` straight from dense matrices.
fn dense_expectation(rho: &DensityMatrix, m: &MeasurementSetting, j: u64) -> f64 {
    let u = setting_unitary(m).unwrap();
    let o = dense_pauli(&z_operator(m.n(), j)).unwrap();
    (u.adjoint() * o * u * rho.matrix()).trace().re
}

fn bell() -> DensityMatrix {
    let s = 1.0 / 2f64.sqrt();
    let psi = DVector::from_vec(vec![
        Complex64::new(s, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
    ]);
    DensityMatrix::from_pure(&psi).unwrap()
}

fn setting(n: usize, label: &str) -> MeasurementSetting {
    MeasurementSetting::from_label(n, label).unwrap()
}

#[test]
fn random_pure_state_is_pure_and_deterministic() {
    for seed in 0..5 {
        let a = random_pure_state(3, seed).unwrap();
        assert!((a.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!((a.purity() - 1.0).abs() < 1e-12);
        assert_eq!(a, random_pure_state(3, seed).unwrap());
    }
    assert_ne!(random_pure_state(2, 1).unwrap(), random_pure_state(2, 2).unwrap());
}

#[test]
fn random_pure_state_rejects_large_n() {
    assert!(matches!(random_pure_state(9, 0), Err(Error::Capacity { .. })));
}

#[test]
fn haar_bloch_vectors_average_to_zero() {
    let mut r = rng(11);
    let mut mean = [0.0; 3];
    let samples = 10_000;
    for _ in 0..samples {
        let rho = random_pure_state_with(1, &mut r).unwrap();
        let m = rho.matrix();
        mean[0] += 2.0 * m[(0, 1)].re;
        mean[1] += -2.0 * m[(0, 1)].im;
        mean[2] += (m[(0, 0)] - m[(1, 1)]).re;
    }
    let norm = mean.iter().map(|v| (v / samples as f64).powi(2)).sum::<f64>().sqrt();
    assert!(norm < 0.02, "mean Bloch vector norm {norm}");
}

#[test]
fn mixed_states_are_valid() {
    let rho = random_mixed_state_with(2, &mut rng(3)).unwrap();
    assert!(rho.purity() < 1.0);
    assert!(rho.min_eigenvalue() > -1e-8);
}

#[test]
fn infidelity_examples() {
    let zero = DensityMatrix::basis(1, 0).unwrap();
    let one = DensityMatrix::basis(1, 1).unwrap();
    let mixed = DensityMatrix::maximally_mixed(1).unwrap();
    assert!(infidelity(&zero, &zero).unwrap().abs() < 1e-15);
    assert!((infidelity(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
    let expected = 1.0 - 0.5 / 0.5f64.sqrt();
    assert!((infidelity(&zero, &mixed).unwrap() - expected).abs() < 1e-12);
    assert!((expected - 0.2929).abs() < 1e-4);
    assert!(infidelity(&zero, &DensityMatrix::basis(2, 0).unwrap()).is_err());
}

#[test]
fn zero_noise_unitary_matches_ideal_setting() {
    let g = ConnectivityGraph::complete(3).unwrap();
    let noise = NoiseModel::ideal(&g);
    for m in catalog_new(&g).unwrap().settings() {
        let u = noisy_setting_unitary(m, &noise, &mut rng(5)).unwrap();
        let ideal = setting_unitary(m).unwrap();
        assert!(diff_up_to_phase(&u, &ideal) < 1e-12, "{m}");
        // Global phase aside, the action on states is identical.
        let rho = random_pure_state(3, 9).unwrap();
        let a = &u * rho.matrix() * u.adjoint();
        let b = &ideal * rho.matrix() * ideal.adjoint();
        assert!(max_abs_diff(&a, &b) < 1e-12);
    }
    // Single-qubit settings involve no pulse compilation and match exactly.
    let m = setting(3, "Rx1 Ry3");
    let u = noisy_setting_unitary(&m, &noise, &mut rng(0)).unwrap();
    assert!(max_abs_diff(&u, &setting_unitary(&m).unwrap()) < 1e-12);
}

#[test]
fn amplitude_error_scales_rotation_angle() {
    let g = ConnectivityGraph::chain(1).unwrap();
    let noise = NoiseModel::new(0.05, 0.0, &g).unwrap();
    let m = setting(1, "Rx1");
    let mut r = rng(21);
    let mut seen_sign = [false, false];
    for _ in 0..200 {
        let u = noisy_setting_unitary(&m, &noise, &mut r).unwrap();
        // R_x(phi) = cos(phi/2) I - i sin(phi/2) X.
        let c = u[(0, 0)].re;
        let s = -u[(0, 1)].im;
        assert!(u[(0, 0)].im.abs() < 1e-12 && u[(0, 1)].re.abs() < 1e-12);
        let phi = 2.0 * s.atan2(c);
        let rel = phi / FRAC_PI_2 - 1.0;
        assert!(rel.abs() <= 0.05 + 1e-12, "relative error {rel}");
        seen_sign[(rel > 0.0) as usize] = true;
    }
    assert_eq!(seen_sign, [true, true]);
}

#[test]
fn residual_coupling_distance_grows_with_zeta() {
    let g = ConnectivityGraph::chain(3).unwrap();
    let m = setting(3, "YY1-2");
    let ideal = setting_unitary(&m).unwrap();
    let mut last = -1.0;
    for zeta in [0.0, 0.01, 0.02, 0.03] {
        let noise = NoiseModel::new(0.0, zeta, &g).unwrap();
        let u = noisy_setting_unitary(&m, &noise, &mut rng(8)).unwrap();
        let d = diff_up_to_phase(&u, &ideal);
        if zeta == 0.0 {
            assert!(d < 1e-12);
        } else {
            assert!(d > last, "distance {d} at zeta {zeta} not above {last}");
        }
        last = d;
    }
}

#[test]
fn residual_coupling_spares_single_qubit_settings() {
    let g = ConnectivityGraph::chain(3).unwrap();
    let noise = NoiseModel::new(0.0, 0.03, &g).unwrap();
    let m = setting(3, "Rx1 Ry2 Rx3");
    let u = noisy_setting_unitary(&m, &noise, &mut rng(1)).unwrap();
    assert!(max_abs_diff(&u, &setting_unitary(&m).unwrap()) < 1e-12);
}

#[test]
fn noise_parameters_are_validated() {
    let g = ConnectivityGraph::chain(2).unwrap();
    assert!(NoiseModel::new(-0.1, 0.0, &g).is_err());
    assert!(NoiseModel::new(0.0, f64::NAN, &g).is_err());
    assert!(NoiseModel::ideal(&g).with_coupling(1, 2, 0.0).is_err());
    let n = NoiseModel::ideal(&g).with_coupling(2, 1, 25.0).unwrap();
    assert_eq!(n.coupling(1, 2), Some(25.0));
    assert_eq!(NoiseModel::ideal(&g).coupling(1, 2), Some(DEFAULT_COUPLING_MHZ));
}

#[test]
fn maximally_mixed_reads_only_identity() {
    let rho = DensityMatrix::maximally_mixed(2).unwrap();
    let noise = NoiseModel::ideal(&ConnectivityGraph::complete(2).unwrap());
    for m in catalog_new(&ConnectivityGraph::complete(2).unwrap()).unwrap().settings() {
        let r = measure_setting(&rho, m, &noise, None, &mut rng(0)).unwrap();
        assert!((r.expectations[0] - 1.0).abs() < 1e-12);
        assert!(r.expectations[1..].iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn ground_state_eigenvalues() {
    let rho = DensityMatrix::basis(2, 0).unwrap();
    let noise = NoiseModel::ideal(&ConnectivityGraph::chain(2).unwrap());
    let r = measure_setting(&rho, &setting(2, "Id"), &noise, None, &mut rng(0)).unwrap();
    for v in &r.expectations {
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bell_state_yy_record_matches_dense_oracle() {
    let rho = bell();
    let m = setting(2, "YY1-2");
    let noise = NoiseModel::ideal(&ConnectivityGraph::chain(2).unwrap());
    let r = measure_setting(&rho, &m, &noise, None, &mut rng(0)).unwrap();
    let plan = TomographyPlan::from_settings(&catalog_new(&ConnectivityGraph::chain(2).unwrap()).unwrap()).unwrap();
    let row = &plan.map()[plan.settings().iter().position(|s| *s == m).unwrap()];
    for (j, e) in row.iter().enumerate() {
        let p = PauliString::from_index(2, e.column + 1).unwrap();
        let truth = (dense_pauli(&p).unwrap() * rho.matrix()).trace().re / 4.0;
        let estimate = e.sign.as_f64() * r.expectations[j] / 4.0;
        assert!((truth - estimate).abs() < 1e-12, "{} via O_{}", p.label(), j + 1);
    }
    // Coefficients 7 (XY) and 10 (YX) are among those read out.
    let cols: Vec<u64> = row.iter().map(|e| e.column + 1).collect();
    assert!(cols.contains(&7) && cols.contains(&10));
}

#[test]
fn yy_record_contributes_negated_coefficient() {
    // A synthetic record where only <O_2> is nonzero.
    let cat = catalog_new(&ConnectivityGraph::complete(2).unwrap()).unwrap();
    let plan = TomographyPlan::from_settings(&cat).unwrap();
    let yy = plan.settings().iter().position(|s| *s == setting(2, "YY1-2")).unwrap();
    let a = 0.3;
    let records: Vec<MeasurementRecord> = (0..plan.len())
        .map(|i| {
            let mut e = vec![0.0; 4];
            e[0] = 1.0;
            if i == yy {
                e[1] = a;
            }
            MeasurementRecord { setting: i, expectations: e, shots: None }
        })
        .collect();
    let (_, mu) = reconstruct(&plan, &records).unwrap();
    let col = plan.map()[yy][1].column as usize;
    assert_eq!(col + 1, 10);
    let readers = plan.map().iter().flatten().filter(|e| e.column as usize == col).count() as f64;
    assert!((mu[col] + a / 4.0 / readers).abs() < 1e-15);
}

#[test]
fn maximally_mixed_round_trip() {
    for n in 1..=3 {
        let rho = DensityMatrix::maximally_mixed(n).unwrap();
        let plan = traditional_plan(n);
        let (est, mu) = reconstruct(&plan, &noiseless_records(&rho, &plan)).unwrap();
        assert_eq!(mu[0], 1.0 / (1 << n) as f64);
        assert!(mu[1..].iter().all(|v| v.abs() < 1e-12));
        assert!(max_abs_diff(est.matrix(), rho.matrix()) < 1e-12);
    }
}

#[test]
fn two_qubit_published_plan_round_trip_entrywise() {
    let labels = ["Rx2", "Ry2", "Rx1", "Ry1", "YY1-2", "XY1-2"];
    let settings: Vec<_> = labels.iter().map(|l| setting(2, l)).collect();
    let cat = SettingCatalog::new(2, settings, tomoplan_core::Provenance::Custom).unwrap();
    let plan = TomographyPlan::from_settings(&cat).unwrap();
    for seed in 0..20 {
        let rho = random_pure_state(2, seed).unwrap();
        let (est, _) = reconstruct(&plan, &noiseless_records(&rho, &plan)).unwrap();
        assert!(max_abs_diff(est.matrix(), rho.matrix()) < 1e-10);
    }
}

#[test]
fn missing_records_are_listed() {
    let plan = traditional_plan(2);
    let rho = random_pure_state(2, 0).unwrap();
    let mut records = noiseless_records(&rho, &plan);
    records.retain(|r| r.setting != 3 && r.setting != 7);
    match reconstruct(&plan, &records) {
        Err(Error::MissingRecords { settings }) => assert_eq!(settings, [3, 7]),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn duplicate_records_are_averaged() {
    let plan = traditional_plan(1);
    let rho = random_pure_state(1, 4).unwrap();
    let mut records = noiseless_records(&rho, &plan);
    let (_, mu) = reconstruct(&plan, &records).unwrap();
    let mut extra = records[1].clone();
    extra.expectations[1] += 0.2;
    records.push(extra);
    let (_, mu2) = reconstruct(&plan, &records).unwrap();
    let col = plan.map()[1][1].column as usize;
    let sign = plan.map()[1][1].sign.as_f64();
    assert!((mu2[col] - (mu[col] + sign * 0.1 / 2.0)).abs() < 1e-12);
}

#[test]
fn coefficient_assembly_matches_dense_paulis() {
    for n in 1..=3 {
        let mut r = rng(n as u64);
        let mu: Vec<f64> = (0..1 << (2 * n)).map(|_| rand::Rng::random::<f64>(&mut r) - 0.5).collect();
        let fast = density_from_coefficients(n, &mu).unwrap();
        let mut slow = CMatrix::zeros(1 << n, 1 << n);
        for (i, &c) in mu.iter().enumerate() {
            slow += dense_pauli(&PauliString::from_index(n, i as u64 + 1).unwrap()).unwrap().scale(c);
        }
        assert!(max_abs_diff(&fast, &slow) < 1e-12);
    }
}

#[test]
fn shot_noise_scales_as_inverse_root() {
    let rho = random_pure_state(2, 5).unwrap();
    let m = setting(2, "Rx1 Ry2");
    let noise = NoiseModel::ideal(&ConnectivityGraph::chain(2).unwrap());
    let exact = measure_setting(&rho, &m, &noise, None, &mut rng(0)).unwrap();
    let spread = |shots: u64| {
        let mut r = rng(shots);
        let reps = 400;
        let mut sq = 0.0;
        for _ in 0..reps {
            let rec = measure_setting(&rho, &m, &noise, Some(shots), &mut r).unwrap();
            assert!((rec.expectations[0] - 1.0).abs() < 1e-12);
            sq += (rec.expectations[3] - exact.expectations[3]).powi(2);
        }
        (sq / reps as f64).sqrt()
    };
    let ratio = spread(100) / spread(10_000);
    assert!((7.0..14.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn zero_shots_is_a_range_error() {
    let rho = DensityMatrix::maximally_mixed(1).unwrap();
    let noise = NoiseModel::ideal(&ConnectivityGraph::chain(1).unwrap());
    let r = measure_setting(&rho, &setting(1, "Id"), &noise, Some(0), &mut rng(0));
    assert!(matches!(r, Err(Error::Range(_))));
}

#[test]
fn state_records_and_plan_files_round_trip() {
    let rho = random_pure_state(2, 6).unwrap();
    let back = load_state(&save_state(&rho)).unwrap();
    assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-14);
    assert!(load_state("n 1\n1 0\n0 0\n0 0\n").is_err());

    let plan = optimal_plan(&ConnectivityGraph::chain(3).unwrap());
    assert_eq!(load_plan(&save_plan(&plan)).unwrap(), plan);

    let rho3 = random_pure_state(3, 1).unwrap();
    let records = noiseless_records(&rho3, &plan);
    let (n, loaded) = load_records(&save_records(3, &records)).unwrap();
    assert_eq!(n, 3);
    assert_eq!(loaded, records);
}

#[test]
fn plan_rejects_incomplete_selection() {
    let cat = catalog_traditional(2).unwrap();
    assert!(matches!(TomographyPlan::from_catalog(&cat, &[0, 1, 2]), Err(Error::Infeasible { .. })));
    assert!(matches!(TomographyPlan::from_catalog(&cat, &[9]), Err(Error::Range(_))));
}

#[test]
fn robustness_rejects_empty_grids() {
    let g = ConnectivityGraph::complete(2).unwrap();
    let plan = traditional_plan(2);
    let cfg = RobustnessConfig {
        eta_grid: vec![],
        zeta_grid: vec![0.0],
        num_states: 2,
        seed: 1,
        shots: None,
        ensemble: StateEnsemble::Pure,
    };
    assert!(matches!(robustness_experiment(&g, &[("t", &plan)], &cfg), Err(Error::Range(_))));
}

#[test]
fn robustness_zero_noise_and_determinism() {
    let g = ConnectivityGraph::complete(2).unwrap();
    let new = optimal_plan(&g);
    let trad = traditional_plan(2);
    let cfg = RobustnessConfig {
        eta_grid: vec![0.0, 0.05],
        zeta_grid: vec![0.0, 0.02],
        num_states: 50,
        seed: 3,
        shots: None,
        ensemble: StateEnsemble::Pure,
    };
    let rows = robustness_experiment(&g, &[("new", &new), ("traditional", &trad)], &cfg).unwrap();
    assert_eq!(rows.len(), 8);
    for r in rows.iter().filter(|r| r.eta == 0.0 && r.zeta == 0.0) {
        assert!(r.mean_infidelity < 1e-9, "{r:?}");
    }
    let again = robustness_experiment(&g, &[("new", &new), ("traditional", &trad)], &cfg).unwrap();
    assert_eq!(robustness_csv(&rows), robustness_csv(&again));
    assert!(robustness_csv(&rows).starts_with("scheme,eta,zeta,mean_infidelity,std_error,num_states,seed\n"));
}

#[test]
fn setting_labels_round_trip() {
    let cat = catalog_new(&ConnectivityGraph::complete(3).unwrap()).unwrap();
    for m in cat.settings() {
        assert_eq!(&MeasurementSetting::from_label(3, &m.label()).unwrap(), m);
    }
    assert!(MeasurementSetting::from_label(2, "Rz1").is_err());
    assert!(MeasurementSetting::from_label(2, "Rx3").is_err());
    assert_eq!(
        MeasurementSetting::from_label(2, "Ry2").unwrap(),
        MeasurementSetting::from_parts(2, &[GateKind::Id, GateKind::RotY], None).unwrap()
    );
}

fn state_strategy(n: usize) -> impl Strategy<Value = DensityMatrix> {
    any::<u64>().prop_map(move |s| random_pure_state(n, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn noiseless_expectations_match_conjugation(rho in state_strategy(3), row in 0usize..45) {
        let g = ConnectivityGraph::complete(3).unwrap();
        let cat = catalog_new(&g).unwrap();
        let m = &cat.settings()[row];
        let r = measure_setting(&rho, m, &NoiseModel::ideal(&g), None, &mut rng(0)).unwrap();
        for j in 0..8u64 {
            prop_assert!((r.expectations[j as usize] - dense_expectation(&rho, m, j)).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstructed_coefficients_are_bounded(seed in any::<u64>(), eta in 0.0..0.05f64, zeta in 0.0..0.03f64) {
        let g = ConnectivityGraph::chain(2).unwrap();
        let plan = traditional_plan(2);
        let noise = NoiseModel::new(eta, zeta, &g).unwrap();
        let rho = random_pure_state(2, seed).unwrap();
        let mut r = rng(seed);
        let records: Vec<_> = plan.settings().iter().enumerate().map(|(i, m)| {
            let mut rec = measure_setting(&rho, m, &noise, Some(50), &mut r).unwrap();
            rec.setting = i;
            rec
        }).collect();
        let (_, mu) = reconstruct(&plan, &records).unwrap();
        prop_assert!(mu.iter().all(|v| v.abs() <= 0.25 + 1e-12));
    }

    #[test]
    fn reconstruction_is_linear(a in state_strategy(2), b in state_strategy(2), alpha in 0.0..1.0f64) {
        let plan = traditional_plan(2);
        let mix = a.mix(&b, alpha).unwrap();
        let (ra, _) = reconstruct(&plan, &noiseless_records(&a, &plan)).unwrap();
        let (rb, _) = reconstruct(&plan, &noiseless_records(&b, &plan)).unwrap();
        let (rm, _) = reconstruct(&plan, &noiseless_records(&mix, &plan)).unwrap();
        let combo = ra.matrix().scale(alpha) + rb.matrix().scale(1.0 - alpha);
        prop_assert!(max_abs_diff(rm.matrix(), &combo) < 1e-10);
    }
}

#[test]
fn noiseless_round_trip_over_random_states() {
    for n in [2, 3] {
        let g = ConnectivityGraph::complete(n).unwrap();
        for plan in [optimal_plan(&g), optimal_plan(&ConnectivityGraph::chain(n).unwrap()), traditional_plan(n)] {
            for seed in 0..50 {
                let rho = random_pure_state(n, 1000 + seed).unwrap();
                let (est, _) = reconstruct(&plan, &noiseless_records(&rho, &plan)).unwrap();
                assert!(infidelity(&rho, &est).unwrap() < 1e-10);
            }
        }
    }
}
