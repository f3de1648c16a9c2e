//! Monte Carlo driver for the `locrec` estimators: single trials, m/m*
//! sweeps, runtime benchmarks and haplotype-style simulations, all emitted
//! as CSV.

pub mod config;
pub mod experiment;
pub mod record;

pub use experiment::{
    bench, haplosim, sweep, BenchRow, Experiment, ExperimentPlan, HaploMode, HaploOptions,
    ModelSpec, NoiseSpec,
};
pub use record::{switch_error, TrialRecord, CSV_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] locrec::Error),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("config file line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
