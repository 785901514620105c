use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A lower hypergeometric parameter hits a nonpositive integer before
    /// the series terminates.
    #[error("singular hypergeometric parameter {parameter} (series does not terminate first)")]
    SingularParameter { parameter: f64 },

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("Fock cutoff {requested} exceeds the hard ceiling {ceiling}")]
    CutoffOverflow { requested: usize, ceiling: usize },

    /// The operator sequence annihilates the state (zero trace).
    #[error("operation sequence maps the state to the null operator")]
    NullState,

    /// The closed form is not usable for these parameters; use the oracle.
    #[error("closed form unsupported here: {0}")]
    UnsupportedBranch(&'static str),

    #[error("displaced-parity sum not converged (tail mass {tail:e})")]
    CutoffInadequate { tail: f64 },

    #[error("Mandel Q undefined: mean photon number {mean:e} is zero")]
    UndefinedQ { mean: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
