use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree must be at least 2, got {0}")]
    InvalidDegree(u32),

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: u64, cap: u64 },

    #[error("interval radius {radius:.3e} exceeded the escape margin {margin:.3e} at step {step}")]
    PrecisionExhausted { step: u32, radius: f64, margin: f64 },

    #[error("budget exhausted: {0}")]
    BudgetExceeded(String),

    #[error("root branch unsafe: a product factor has modulus {modulus:.3e} at radius {radius}")]
    BranchAmbiguity { modulus: f64, radius: f64 },

    #[error("Laurent fit inconsistent between radii: discrepancy {discrepancy:.3e} above {tolerance:.3e}")]
    FitInconsistent { discrepancy: f64, tolerance: f64 },

    #[error("root finder did not converge after {sweeps} sweeps at {precision_bits} bits")]
    NonConvergence {
        sweeps: u32,
        precision_bits: u32,
        partial: Vec<(f64, f64)>,
    },

    #[error("inclusion disks still overlap at the precision cap of {0} bits")]
    PrecisionInsufficient(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
