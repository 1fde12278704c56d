use picardkit_core::counting::CountError;
use picardkit_core::galmod::GalmodError;
use picardkit_core::lattice::LatticeError;
use picardkit_core::weil::WeilError;
use picardkit_core::zeta::ZetaError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_UNDECIDED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Undecided(_) => EXIT_UNDECIDED,
            CliError::Internal(_) | CliError::Io(_) => EXIT_INTERNAL,
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::BudgetExceeded { .. } | CountError::FieldTooLarge(_) | CountError::Overflow => {
                CliError::Budget(e.to_string())
            }
            CountError::Field(_) | CountError::Inconsistent(_) => CliError::Invalid(e.to_string()),
            CountError::Cache(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<ZetaError> for CliError {
    fn from(e: ZetaError) -> Self {
        match e {
            ZetaError::InsufficientCounts { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<WeilError> for CliError {
    fn from(e: WeilError) -> Self {
        match e {
            WeilError::PrecisionExceeded(_) => CliError::Budget(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<GalmodError> for CliError {
    fn from(e: GalmodError) -> Self {
        match e {
            GalmodError::ModulusTooLarge => CliError::Budget(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}
