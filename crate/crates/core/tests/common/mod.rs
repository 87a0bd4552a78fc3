#![allow(dead_code)]

use std::path::PathBuf;

use tomoplan_core::catalog::load_setting_list;
use tomoplan_core::SettingCatalog;

/// Signed 11 x 16 readout matrix of the two-qubit complete-graph catalog,
/// rows in catalog order, columns in Pauli index order.
pub const TWO_QUBIT_MATRIX: [(&str, [i8; 16]); 11] = [
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

/// `O`, `YY^dagger O YY`, `XY^dagger O XY` for the two-qubit Z-strings.
pub const PAIR_CONJUGATIONS: [(&str, &str, &str); 4] = [
    ("II", "II", "II"),
    ("IZ", "-YX", "-XX"),
    ("ZI", "-XY", "YY"),
    ("ZZ", "ZZ", "ZZ"),
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> SettingCatalog {
    load_setting_list(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}
