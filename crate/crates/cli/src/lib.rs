//! Scenario configuration, figure presets, CSV output and model comparison
//! for the two-qubit simulator.

// `!(x > 0.0)` is deliberate: NaN must fail the positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod presets;
pub mod report;
pub mod scenario;
pub mod selftest;

pub use config::{parse_config, ConfigError, InitialState, Metric, Model, ScenarioConfig, TMax};
pub use error::CliError;
pub use presets::figure_preset;
pub use report::{compare_report, sweep, CompareReport, SweepAxis, SweepResult};
pub use scenario::{run_scenario, write_outputs, ScenarioRun};
pub use selftest::{oracle_check, selftest, OracleCheck};
