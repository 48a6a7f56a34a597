use thiserror::Error;

/// Errors produced while building, solving, or simulating precoder designs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulation order {0}: need M >= 2")]
    InvalidOrder(usize),

    #[error("phase {angle:.12} rad is within tolerance of a tangent singularity")]
    Singularity { angle: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The phase-constraint matrix leaves no null space: 2*N_t - rank <= 0.
    #[error("empty null space: 2*N_t - rank = {dof} (N_t = {n_t}, rank = {rank})")]
    EmptyNullSpace { n_t: usize, rank: usize, dof: isize },

    #[error("constraint set is empty (no precoder satisfies every receive constraint)")]
    Infeasible,

    #[error("numerical failure: {reason} (condition estimate {condition:.3e})")]
    Numerical { reason: String, condition: f64 },

    #[error("eavesdropper capability: {0}")]
    Capability(String),

    #[error("lookup table needs {required} entries, cap is {cap}")]
    TableTooLarge { required: f64, cap: usize },

    #[error("oracle refuses instance: {0}")]
    OracleRefused(String),

    /// Every instance of a scenario point was infeasible.
    #[error("no feasible instance: {0}")]
    AllInfeasible(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn numerical(reason: impl Into<String>, condition: f64) -> Self {
        Error::Numerical {
            reason: reason.into(),
            condition,
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
