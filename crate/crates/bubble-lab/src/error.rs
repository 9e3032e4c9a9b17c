//! Crate-wide error type and exit-code mapping.
//!
//! Numerical routines return [`Error::Domain`] for arguments outside their
//! supported range and [`Error::Quadrature`] when an adaptive integral cannot
//! reach its requested accuracy, rather than silently degrading.  Simulation
//! entry points distinguish configuration problems, precondition failures
//! (e.g. a CFL violation), and runtime divergence so the CLI can map them to
//! distinct process exit codes.

use thiserror::Error;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a routine.
    #[error("domain error in {context}: {message}")]
    Domain {
        /// The routine or quantity being evaluated.
        context: &'static str,
        /// Human-readable description including the offending value.
        message: String,
    },

    /// An adaptive quadrature failed to meet its error target.
    #[error("quadrature reached error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature {
        /// Error estimate actually achieved.
        achieved: f64,
        /// Error bound that was requested.
        requested: f64,
    },

    /// Time step too large for the spatial grid (explicit-scheme stability).
    #[error("CFL violation: dt = {dt:.6e} exceeds limit {limit:.6e} for dx = {dx:.6e}")]
    Cfl {
        /// Requested time step.
        dt: f64,
        /// Grid spacing.
        dx: f64,
        /// Maximum stable time step.
        limit: f64,
    },

    /// Initial data support too close to the domain boundary for the
    /// requested integration time (the numerical light cone would reach it).
    #[error("support margin: data support within {margin:.4} of the boundary, needs {needed:.4}")]
    SupportMargin {
        /// Distance between the data support and the boundary.
        margin: f64,
        /// Margin required for the configured final time.
        needed: f64,
    },

    /// Two quantities expected to agree do not (self-check failures).
    #[error("mismatch in {context}: {message}")]
    Mismatch {
        /// What was being compared.
        context: &'static str,
        /// Values and tolerance involved.
        message: String,
    },

    /// A configuration file is syntactically valid but semantically wrong.
    #[error("config error: {0}")]
    Config(String),

    /// The field amplitude exceeded the divergence threshold.
    #[error("solution diverged at t = {t:.6}: max |field| = {amplitude:.3e}")]
    Diverged {
        /// Time at which the threshold was crossed.
        t: f64,
        /// Amplitude observed.
        amplitude: f64,
    },

    /// Filesystem failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// CSV writing failure.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 = bad config / usage, 2 = violated
    /// precondition (domain, CFL, support margin, quadrature), 3 = runtime
    /// divergence or failed self-check.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) => 1,
            Error::Domain { .. }
            | Error::Quadrature { .. }
            | Error::Cfl { .. }
            | Error::SupportMargin { .. } => 2,
            Error::Diverged { .. } | Error::Mismatch { .. } => 3,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }

    /// Shorthand constructor for [`Error::Domain`].
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            context,
            message: message.into(),
        }
    }

    /// Shorthand constructor for [`Error::Mismatch`].
    pub fn mismatch(context: &'static str, message: impl Into<String>) -> Self {
        Error::Mismatch {
            context,
            message: message.into(),
        }
    }
}
