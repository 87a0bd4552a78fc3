use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nalgebra::DVector;
use num_complex::Complex64;
use tempfile::TempDir;
use tomoplan_core::sim::{load_state, save_state, DensityMatrix};

fn tomoplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomoplan"))
        .args(args)
        .env("TOMOPLAN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {line:?}"))
}

fn plan_file(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["plan"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", s(&path)]);
    let o = tomoplan(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path
}

fn write_state(dir: &TempDir, name: &str, rho: &DensityMatrix) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, save_state(rho)).unwrap();
    path
}

fn bell() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = DVector::from_vec(vec![
        Complex64::new(h, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
    ]);
    DensityMatrix::from_pure(&psi).unwrap()
}

fn csv_shape(text: &str) -> (usize, usize) {
    let lines: Vec<&str> = text.lines().collect();
    let cols = lines[0].split(',').count() - 1;
    for l in &lines[1..] {
        assert_eq!(l.split(',').count() - 1, cols);
    }
    (lines.len() - 1, cols)
}

#[test]
fn plan_summary_lines() {
    for (args, k) in [
        (&["--n", "2", "--topology", "complete"][..], "6"),
        (&["--n", "3", "--topology", "chain"][..], "16"),
        (&["--n", "2", "--topology", "complete", "--catalog", "traditional"][..], "9"),
    ] {
        let mut full = vec!["plan"];
        full.extend_from_slice(args);
        let o = tomoplan(&full);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let line = stdout(&o);
        assert_eq!(field(&line, "settings"), k, "{line}");
        assert_eq!(field(&line, "status"), "optimal", "{line}");
        assert_eq!(field(&line, "lower_bound"), k, "{line}");
        assert!(line.starts_with("n="));
    }
}

#[test]
fn plan_then_verify_round_trips() {
    let dir = TempDir::new().unwrap();
    for (i, args) in [
        &["--n", "2"][..],
        &["--n", "3", "--topology", "chain"][..],
        &["--n", "3", "--topology", "complete", "--catalog", "lemma2"][..],
        &["--topology", "grid:2x2"][..],
        &["--n", "3", "--catalog", "traditional"][..],
    ]
    .iter()
    .enumerate()
    {
        let p = plan_file(&dir, &format!("p{i}.json"), args);
        let o = tomoplan(&["verify", s(&p)]);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).contains("complete"));
        let mut with_cfg = vec!["verify", s(&p)];
        with_cfg.extend_from_slice(args);
        assert_eq!(code(&tomoplan(&with_cfg)), 0, "{args:?}");
    }
}

#[test]
fn verify_published_fixtures() {
    for (name, k) in [("aa2.txt", 6), ("aa3.txt", 15), ("aa4.txt", 35), ("nn2.txt", 6), ("nn3.txt", 16), ("nn4.txt", 39)] {
        let o = tomoplan(&["verify", s(&fixture(name))]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        assert_eq!(field(&stdout(&o), "settings"), k.to_string());
    }
}

#[test]
fn verify_truncated_fixture_exits_3() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(fixture("aa2.txt")).unwrap();
    let truncated: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).take(6).collect();
    let path = dir.path().join("aa2-truncated.txt");
    std::fs::write(&path, truncated.join("\n")).unwrap();
    let o = tomoplan(&["verify", s(&path)]);
    assert_eq!(code(&o), 3);
    assert_eq!(field(&stdout(&o), "settings"), "5");
    assert!(stderr(&o).contains("uncovered"));
}

#[test]
fn verify_hash_mismatch_exits_4() {
    let dir = TempDir::new().unwrap();
    let p = plan_file(&dir, "aa3.json", &["--n", "3", "--topology", "complete"]);
    assert_eq!(code(&tomoplan(&["verify", s(&p), "--topology", "complete"])), 0);
    let o = tomoplan(&["verify", s(&p), "--topology", "chain"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert_eq!(code(&tomoplan(&["verify", s(&p), "--catalog", "traditional"])), 4);
}

#[test]
fn verify_catalog_files() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cat.json");
    let o = tomoplan(&["catalog", "--n", "3", "--topology", "chain", "--out", s(&path)]);
    assert_eq!(code(&o), 0);
    assert_eq!(field(&stdout(&o), "settings"), "39");
    let o = tomoplan(&["verify", s(&path), "--topology", "chain"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "settings"), "39");
}

#[test]
fn export_shapes() {
    for (topology, rows) in [("complete", 15), ("chain", 16)] {
        let o = tomoplan(&["export", "--n", "3", "--topology", topology]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert_eq!(csv_shape(&stdout(&o)), (rows, 64));
    }
}

#[test]
fn export_from_plan_file_matches_solved_export() {
    let dir = TempDir::new().unwrap();
    let p = plan_file(&dir, "nn3.json", &["--n", "3", "--topology", "chain"]);
    let out = dir.path().join("nn3.csv");
    let o = tomoplan(&["export", "--plan", s(&p), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let from_file = std::fs::read_to_string(&out).unwrap();
    let direct = stdout(&tomoplan(&["export", "--n", "3", "--topology", "chain"]));
    assert_eq!(from_file, direct);
}

const TWO_QUBIT_MATRIX: [(&str, [i8; 16]); 11] = [
    ("Id", [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1]),
    ("Rx2", [1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0]),
    ("Ry2", [1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0]),
    ("Rx1", [1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0]),
    ("Rx1 Rx2", [1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0]),
    ("Rx1 Ry2", [1, -1, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, 0, 0]),
    ("Ry1", [1, 0, 0, 1, -1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0]),
    ("Ry1 Rx2", [1, 0, 1, 0, -1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    ("Ry1 Ry2", [1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    ("YY1-2", [1, 0, 0, 0, 0, 0, -1, 0, 0, -1, 0, 0, 0, 0, 0, 1]),
    ("XY1-2", [1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
];

#[test]
fn export_full_two_qubit_catalog_is_the_signed_table() {
    let o = tomoplan(&["export", "--n", "2", "--topology", "complete", "--all"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(csv_shape(&text), (11, 16));
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').skip(1).collect();
    assert_eq!(
        header,
        ["II", "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ"]
    );
    for (line, (label, row)) in lines.zip(TWO_QUBIT_MATRIX.iter()) {
        let mut f = line.split(',');
        assert_eq!(f.next().unwrap(), *label);
        let got: Vec<i8> = f.map(|v| v.parse().unwrap()).collect();
        assert_eq!(got, row.to_vec(), "{label}");
    }
}

#[test]
fn simulate_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |out: &Path| {
        vec![
            "simulate".to_string(),
            "--n".into(),
            "3".into(),
            "--states".into(),
            "20".into(),
            "--eta".into(),
            "0:0.05:3".into(),
            "--zeta".into(),
            "0.02".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            s(out).into(),
        ]
    };
    let oa = Command::new(env!("CARGO_BIN_EXE_tomoplan")).args(args(&a)).output().unwrap();
    assert_eq!(code(&oa), 0, "{}", stderr(&oa));
    let ob = Command::new(env!("CARGO_BIN_EXE_tomoplan"))
        .args(args(&b))
        .env("TOMOPLAN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&ob), 0);
    let ta = std::fs::read(&a).unwrap();
    assert_eq!(ta, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ta).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 3);
    assert_eq!(rows.iter().filter(|r| r.starts_with("new,")).count(), 3);
    assert_eq!(rows.iter().filter(|r| r.starts_with("traditional,")).count(), 3);
    assert_eq!(stdout(&oa).lines().count(), 3);
}

#[test]
fn simulate_zero_noise_is_exact() {
    let o = tomoplan(&["simulate", "--n", "2", "--states", "10", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let mean: f64 = r.split(',').nth(3).unwrap().parse().unwrap();
        assert!(mean.abs() < 1e-9, "{r}");
    }
}

#[test]
fn simulate_requires_seed_and_valid_ranges() {
    assert_ne!(code(&tomoplan(&["simulate", "--n", "2", "--states", "5"])), 0);
    assert_eq!(code(&tomoplan(&["simulate", "--n", "2", "--states", "0", "--seed", "1"])), 6);
    assert_eq!(code(&tomoplan(&["plan", "--n", "2", "--budget", "0"])), 6);
    assert_eq!(code(&tomoplan(&["simulate", "--n", "7", "--catalog", "traditional", "--states", "1", "--seed", "1"])), 6);
}

#[test]
fn reconstruct_bell_state_from_published_plan() {
    let dir = TempDir::new().unwrap();
    let plan = dir.path().join("aa2.json");
    let cat = std::fs::read_to_string(fixture("aa2.txt")).unwrap();
    let list = tomoplan_core::catalog::load_setting_list(&cat).unwrap();
    let p = tomoplan_core::sim::TomographyPlan::from_settings(&list).unwrap();
    std::fs::write(&plan, tomoplan_core::sim::save_plan(&p)).unwrap();
    let state = write_state(&dir, "bell.txt", &bell());
    let records = dir.path().join("bell.records");
    let o = tomoplan(&["measure", "--plan", s(&plan), "--state", s(&state), "--out", s(&records)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let est = dir.path().join("est.txt");
    let o = tomoplan(&[
        "reconstruct",
        "--plan",
        s(&plan),
        "--records",
        s(&records),
        "--reference",
        s(&state),
        "--out",
        s(&est),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let inf: f64 = field(&stdout(&o), "infidelity").parse().unwrap();
    assert!(inf.abs() < 1e-10, "{inf}");
    let rho = load_state(&std::fs::read_to_string(&est).unwrap()).unwrap();
    assert!((rho.matrix() - bell().matrix()).norm() < 1e-10);
}

#[test]
fn reconstruct_maximally_mixed() {
    let dir = TempDir::new().unwrap();
    let plan = plan_file(&dir, "p.json", &["--n", "2"]);
    let state = write_state(&dir, "mixed.txt", &DensityMatrix::maximally_mixed(2).unwrap());
    let records = dir.path().join("r.json");
    assert_eq!(
        code(&tomoplan(&["measure", "--plan", s(&plan), "--state", s(&state), "--out", s(&records)])),
        0
    );
    let o = tomoplan(&["reconstruct", "--plan", s(&plan), "--records", s(&records)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rho = load_state(&stdout(&o)).unwrap();
    let expected = DensityMatrix::maximally_mixed(2).unwrap();
    assert!((rho.matrix() - expected.matrix()).norm() < 1e-12);
}

#[test]
fn reconstruct_missing_record_exits_7() {
    let dir = TempDir::new().unwrap();
    let plan = plan_file(&dir, "p.json", &["--n", "2"]);
    let text = std::fs::read_to_string(&plan).unwrap();
    let p = tomoplan_core::sim::load_plan(&text).unwrap();
    let xy = p.settings().iter().position(|m| m.label() == "XY1-2").expect("plan uses XY");
    let state = write_state(&dir, "bell.txt", &bell());
    let records = dir.path().join("r.json");
    assert_eq!(
        code(&tomoplan(&["measure", "--plan", s(&plan), "--state", s(&state), "--out", s(&records)])),
        0
    );
    let full = std::fs::read_to_string(&records).unwrap();
    let needle = format!("\"setting\":{xy},");
    let kept: Vec<&str> = full.lines().filter(|l| !l.contains(&needle)).collect();
    assert_eq!(kept.len() + 1, full.lines().count());
    let kept = kept.join("\n").replace(",\n  ]", "\n  ]");
    let trimmed = dir.path().join("trimmed.json");
    std::fs::write(&trimmed, kept).unwrap();
    let o = tomoplan(&["reconstruct", "--plan", s(&plan), "--records", s(&trimmed)]);
    assert_eq!(code(&o), 7, "{}", stderr(&o));
    assert!(stderr(&o).contains(&xy.to_string()));
}

#[test]
fn measure_is_seeded() {
    let dir = TempDir::new().unwrap();
    let plan = plan_file(&dir, "p.json", &["--n", "2"]);
    let state = write_state(&dir, "bell.txt", &bell());
    let base = ["measure", "--plan", s(&plan), "--state", s(&state), "--shots", "100"];
    assert_ne!(code(&tomoplan(&base)), 0);
    let mut seeded = base.to_vec();
    seeded.extend_from_slice(&["--seed", "11"]);
    let a = tomoplan(&seeded);
    let b = tomoplan(&seeded);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn custom_topology_from_edge_list() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    std::fs::write(&g, "n 3\n1 2\n2 3\n").unwrap();
    let o = tomoplan(&["plan", "--topology", "custom", "--graph", s(&g)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "settings"), "16");
    assert_eq!(code(&tomoplan(&["plan", "--n", "4", "--graph", s(&g)])), 1);
}

#[test]
fn io_failures_exit_5() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&tomoplan(&["verify", s(&dir.path().join("absent.json"))])), 5);
    let bad = dir.path().join("no-such-dir").join("p.json");
    assert_eq!(code(&tomoplan(&["plan", "--n", "2", "--out", s(&bad)])), 5);
}

#[test]
fn help_documents_every_flag() {
    let o = tomoplan(&["simulate", "--help"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for flag in ["--n", "--topology", "--graph", "--catalog", "--budget", "--states", "--eta", "--zeta", "--shots", "--seed", "--out"] {
        assert!(text.contains(flag), "{flag}");
    }
}
