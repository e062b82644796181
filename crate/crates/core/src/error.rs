use thiserror::Error;

/// Errors raised while building designs, evaluating bases, or sizing budgets.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid knots: {0}")]
    InvalidKnots(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("infeasible budget: {0}")]
    InfeasibleBudget(String),

    #[error("infeasible geometry: {0}")]
    InfeasibleGeometry(String),

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDomain(_) => "invalid_domain",
            Error::InvalidKnots(_) => "invalid_knots",
            Error::InvalidWeights(_) => "invalid_weights",
            Error::InfeasibleBudget(_) => "infeasible_budget",
            Error::InfeasibleGeometry(_) => "infeasible_geometry",
            Error::MissingData(_) => "missing_data",
            Error::Unsupported(_) => "unsupported",
            Error::Config(_) => "config",
            Error::Numerical(_) => "numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
