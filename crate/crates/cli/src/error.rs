//! Error taxonomy mapped to process exit codes: configuration/usage
//! problems exit 2, numerical failures exit 3, validation failures exit 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0} validation check(s) failed")]
    ValidationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::ValidationFailed(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<sbs_core::params::ParamsError> for CliError {
    fn from(e: sbs_core::params::ParamsError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<sbs_core::special::SpecialError> for CliError {
    fn from(e: sbs_core::special::SpecialError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<sbs_core::quad::QuadError> for CliError {
    fn from(e: sbs_core::quad::QuadError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<sbs_core::means::MeanError> for CliError {
    fn from(e: sbs_core::means::MeanError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<sbs_core::indicators::IndicatorError> for CliError {
    fn from(e: sbs_core::indicators::IndicatorError) -> Self {
        match e {
            sbs_core::indicators::IndicatorError::Params(p) => CliError::Config(p.to_string()),
            sbs_core::indicators::IndicatorError::WindowBelowSystemFrequency { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<sbs_core::regime::RegimeError> for CliError {
    fn from(e: sbs_core::regime::RegimeError) -> Self {
        match e {
            sbs_core::regime::RegimeError::BadEpsilon(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<sbs_fock::FockError> for CliError {
    fn from(e: sbs_fock::FockError) -> Self {
        CliError::Numerical(e.to_string())
    }
}
