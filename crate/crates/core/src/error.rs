use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not a density matrix: {0}")]
    InvalidState(String),

    #[error("unphysical Bell-diagonal parameters: {label} weight is {eigenvalue:.6}")]
    Unphysical {
        label: &'static str,
        eigenvalue: f64,
    },

    #[error("{0}")]
    Domain(String),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error(
        "solver did not converge after {iterations} iterations (bounds [{lower:.9}, {upper:.9}])"
    )]
    Convergence {
        lower: f64,
        upper: f64,
        iterations: usize,
    },

    #[error("at t = {time} s: {source}")]
    AtTime {
        time: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Innermost error, skipping time annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtTime { source, .. } => source.root(),
            other => other,
        }
    }
}
