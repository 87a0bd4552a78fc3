//! Dense density-matrix simulation of readout, the control-error model,
//! linear-inversion reconstruction and the noise robustness study.

mod measure;
mod noise;
mod plan;
mod reconstruct;
mod robustness;
mod state;

pub use measure::{measure_setting, z_expectations, MeasurementRecord};
pub use noise::{noisy_setting_unitary, NoiseModel, DEFAULT_COUPLING_MHZ};
pub use plan::{load_plan, read_plan, save_plan, PlanRecord, TomographyPlan, PLAN_FORMAT};
pub use reconstruct::{density_from_coefficients, load_records, reconstruct, save_records, RECORDS_FORMAT};
pub use robustness::{robustness_csv, robustness_experiment, RobustnessConfig, RobustnessRow, StateEnsemble};
pub use state::{
    infidelity, load_state, random_mixed_state_with, random_pure_state, random_pure_state_with, save_state,
    DensityMatrix,
};
