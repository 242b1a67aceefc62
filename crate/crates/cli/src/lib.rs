pub mod commands;
pub mod config;
pub mod report;

use kzh_analytic::AnalyticError;
use kzh_core::chevalley::ChevalleyError;
use kzh_core::connections::ConnectionError;
use kzh_core::liealg::LieError;
use kzh_core::logforms::LogFormError;
use kzh_core::scalars::ScalarError;
use thiserror::Error;

pub use commands::{run, Command};
pub use config::{read_raw, Job, KappaSetting, Overrides, RawConfig};
pub use report::{Report, SCHEMA};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },
    #[error("sampler: {0}")]
    Sampler(String),
    #[error("{0}")]
    Runtime(String),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { path: path.into(), message: message.into() }
    }

    /// 2 for bad input, 3 when the sampler gives up, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io(_) => 2,
            CliError::Sampler(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::SamplerExhausted { .. } => CliError::Sampler(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        CliError::config("algebra", e.to_string())
    }
}

impl From<ChevalleyError> for CliError {
    fn from(e: ChevalleyError) -> Self {
        CliError::config("problem.k", e.to_string())
    }
}

impl From<LogFormError> for CliError {
    fn from(e: LogFormError) -> Self {
        match e {
            LogFormError::UnluckySample { .. } => CliError::Sampler(e.to_string()),
            LogFormError::Sampler(s) => s.into(),
            LogFormError::Shape(m) => CliError::config("options", m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<ConnectionError> for CliError {
    fn from(e: ConnectionError) -> Self {
        match e {
            ConnectionError::MissingOmega(_) => CliError::config("algebra", e.to_string()),
            ConnectionError::Lie(l) => l.into(),
            ConnectionError::Chevalley(c) => c.into(),
            ConnectionError::Forms(f) => f.into(),
            ConnectionError::Sampler(s) => s.into(),
            ConnectionError::Shape(m) => CliError::Runtime(m),
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::Sampler(s) => s.into(),
            AnalyticError::Lie(l) => l.into(),
            AnalyticError::Shape(_) | AnalyticError::Unsupported(_) | AnalyticError::BranchCrossing(_) => {
                CliError::config("options", e.to_string())
            }
            AnalyticError::DivergentExponent { .. } => CliError::config("algebra", e.to_string()),
            AnalyticError::NonConvergence { .. } => CliError::Runtime(e.to_string()),
        }
    }
}
