use std::path::PathBuf;

/// Errors surfaced by the library. The CLI maps these onto exit codes, so the
/// variants distinguish usage problems from numerical failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A lookup outside the tabulated range of a custom reaction.
    #[error("range error: {0}")]
    Range(String),

    /// A parameter combination the construction cannot handle.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Bisection endpoints do not bracket a sign change.
    #[error("bracketing failed: outcome at c={lo} is {lo_outcome}, at c={hi} is {hi_outcome}")]
    Bracket {
        lo: f64,
        hi: f64,
        lo_outcome: String,
        hi_outcome: String,
    },

    /// An iteration hit its step or depth cap without meeting its tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Time step above the stability bound of the explicit scheme.
    #[error("unstable time step dt={dt:.3e} exceeds bound {bound:.3e}")]
    Stability { dt: f64, bound: f64 },

    /// A non-finite value appeared during a computation.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A free boundary reached the edge of the computational domain.
    #[error("front reached the {side} boundary at t={t}")]
    BoundaryCollision { side: &'static str, t: f64 },

    /// The input violates a contract between modules (e.g. a profile built
    /// from a non-connected trajectory).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
