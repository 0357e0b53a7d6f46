use thiserror::Error;

use crate::lattice::Site;

/// Errors raised by the lattice engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice dimensions m={m}, n={n}: both must be at least 1")]
    InvalidLattice { m: usize, n: usize },

    #[error("source {0} is not an interior site")]
    InvalidSource(Site),

    #[error(
        "closed form requires odd m >= 3 (got m={m}); even m and m=1 are served by the oracle method"
    )]
    UnsupportedGeometry { m: usize },

    #[error("mode index j={j} out of range 1..={m}")]
    ModeOutOfRange { j: usize, m: usize },

    #[error("mode j={j} is degenerate (lambda*kappa = 0); its basis functions vanish identically")]
    DegenerateMode { j: usize },

    #[error("matching denominator for mode j={j} is numerically zero ({denominator:e})")]
    SingularMatching { j: usize, denominator: f64 },

    #[error("degenerate mode j={j} did not converge in the small-lambda*kappa limit (relative change {change:e})")]
    DegenerateModeUnresolved { j: usize, change: f64 },

    #[error(
        "assembled closed-form field violates the field equations (scaled residual {residual:e})"
    )]
    ResidualExceeded { residual: f64 },

    #[error("iterative solve stalled at residual {residual:e} after {iterations} iterations")]
    IterationDivergence { residual: f64, iterations: u64 },

    #[error("walk {walk} exceeded the {max_steps}-step cap")]
    WalkOverflow { walk: u64, max_steps: u64 },

    #[error("walk count must be at least 1")]
    NoWalks,

    #[error("geometry mismatch: {0}")]
    SpecMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
