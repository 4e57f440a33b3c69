//! Sweep, validation and scan drivers behind the `sgad` binary.

pub mod check;
pub mod grid;
pub mod output;
pub mod scan;
pub mod sweep;

use sgad_core::sdp::SolverStatus;
use sgad_core::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION_FAILURE: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
    pub const SOLVER_FAILURE: i32 = 3;
}

/// Exit code for a library error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::InvalidState(_) => exit::INPUT_ERROR,
        Error::CpViolation { .. } | Error::IntegrationFailure(_) | Error::Internal(_) => exit::VALIDATION_FAILURE,
    }
}

pub fn status_code(status: SolverStatus) -> i32 {
    match status {
        SolverStatus::Optimal => exit::SUCCESS,
        _ => exit::SOLVER_FAILURE,
    }
}
