//! CLI error kinds, each mapped to a stable process exit code.

use circulant_qft::dynamics::DynamicsError;
use circulant_qft::ioncoup::IonError;
use circulant_qft::numerics::NumericsError;
use circulant_qft::schedules::ScheduleError;
use circulant_qft::spectra::SpectraError;
use thiserror::Error;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<ScheduleError> for CliError {
    fn from(e: ScheduleError) -> Self {
        match e {
            ScheduleError::Spectra(inner) => inner.into(),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::Numerics(inner) => inner.into(),
            SpectraError::FormulaDomain => CliError::Numerical(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::BadInterval { .. } | NumericsError::NoSteps => {
                CliError::Precondition(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Numerics(inner) => inner.into(),
            DynamicsError::Spectra(inner) => inner.into(),
            DynamicsError::Schedule(inner) => inner.into(),
            DynamicsError::InvalidDensity(msg) => CliError::Precondition(msg),
            DynamicsError::TooFewSamples(_) => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<IonError> for CliError {
    fn from(e: IonError) -> Self {
        match e {
            IonError::Resonance { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}
