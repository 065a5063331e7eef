//! Verification driver: configuration, named suites, reports.

pub mod config;
pub mod report;
pub mod suites;

use thiserror::Error;

pub use config::{derived_window, env_seed, Format, SuiteConfig, SuiteName, DEFAULT_SEED};
pub use report::{emit, Check, Report, Status, SCHEMA};
pub use suites::{golden_table, lambda_homology_k_eta, run_suite, table_to_json, GOLDEN_M4};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("malformed configuration: {0}")]
    Config(String),
    #[error("golden file: {0}")]
    Golden(String),
}
