//! Planning, verification and simulation of minimum-measurement-setting
//! state tomography for qubit registers with XX+YY couplings and Z readout.
//!
//! The crate is organised bottom-up:
//!
//! * [`pauli`], [`gates`], [`dense`], [`pulse`]: signed Pauli strings, the
//!   readout gate set, its conjugation tables and a dense-matrix oracle.
//! * [`graph`], [`catalog`], [`coverage`]: connectivity graphs, measurement
//!   setting catalogs and the signed coverage matrix.
//! * [`solver`]: exact and greedy minimum set cover over coverage rows.
//! * [`sim`]: density-matrix simulation, noise model, linear-inversion
//!   reconstruction and the robustness study.

pub mod catalog;
pub mod coverage;
pub mod dense;
pub mod error;
pub mod gates;
pub mod graph;
pub mod pauli;
pub mod pulse;
pub mod sim;
pub mod solver;

pub use catalog::{Provenance, SettingCatalog};
pub use coverage::CoverageMatrix;
pub use error::{Error, Result};
pub use gates::{GateKind, MeasurementSetting, ReadoutGate};
pub use graph::ConnectivityGraph;
pub use pauli::{Pauli, PauliString, Sign};
