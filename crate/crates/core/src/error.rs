use thiserror::Error;

use crate::states::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// One or more Kraus radicands fell below the clamping window.
    #[error("complete-positivity violation at n = {n}, m = {m}, Ωt = {omega_t}: {}", format_radicands(.offending))]
    CpViolation {
        offending: Vec<(String, f64)>,
        n: f64,
        m: f64,
        omega_t: f64,
    },

    #[error("invalid density matrix: {}", format_violations(.0))]
    InvalidState(Vec<Violation>),

    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

fn format_radicands(offending: &[(String, f64)]) -> String {
    offending
        .iter()
        .map(|(name, value)| format!("{name} radicand = {value:.3e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
