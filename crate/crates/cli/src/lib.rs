//! Front end for the `brieskorn` binary: command implementations, curve
//! rendering and the verification suites.

pub mod commands;
pub mod error;
pub mod output;
pub mod render;
pub mod verify;

use brieskorn_core::Tolerances;

pub use error::{exit, CliError, CliResult};

/// Environment variable multiplying every classifier tolerance.
pub const TOL_SCALE_ENV: &str = "BRIESKORN_TOL_SCALE";

/// Tolerances scaled by `BRIESKORN_TOL_SCALE` (default 1).
pub fn tolerances_from_env() -> CliResult<Tolerances> {
    match std::env::var(TOL_SCALE_ENV) {
        Err(_) => Ok(Tolerances::default()),
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(f) if f.is_finite() && f > 0.0 => Ok(Tolerances::scaled(f)),
            _ => Err(CliError::Usage(format!("{TOL_SCALE_ENV} must be a positive number, got {raw:?}"))),
        },
    }
}
