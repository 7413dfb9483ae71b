use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the requested formula
    /// (non-positive coupling, angle at an exact pole, and so on).
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation produced NaN or an infinity where a finite value is
    /// required.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// Post-selection annihilates the state: the overlap and the transition
    /// amplitude both vanish, so no conditional pointer state exists.
    #[error("degenerate post-selection: probability {probability:e} is below the representable floor")]
    DegeneratePostSelection { probability: f64 },

    /// The grid cannot honour its coverage contract for the requested
    /// coupling strength.
    #[error("grid configuration: {0}")]
    GridConfig(String),

    /// A truncated series failed its convergence guard: the last computed
    /// term is still a non-negligible fraction of the running sum.
    #[error("series did not converge: |last term| / |sum| = {last_ratio:e} after {terms} terms")]
    SeriesNonConvergence { terms: usize, last_ratio: f64 },

    /// Hermite recurrence order above the documented stability ceiling.
    #[error("hermite order {n} exceeds the supported ceiling {max}")]
    HermiteOrder { n: usize, max: usize },

    /// The (kind, n) pair does not select a defined mixed Gaussian moment.
    #[error("mixed moment undefined: {0}")]
    MomentUndefined(String),

    /// A tabulated curve violates its density contract (negative values or
    /// an integral away from one).
    #[error("invalid density curve: {0}")]
    InvalidCurve(String),
}
