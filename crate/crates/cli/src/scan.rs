//! Bisection for the gmn > ε boundary along one parameter.

use serde::Serialize;
use sgad_core::channel::{asymptotic_state, MemoryParam, SgadParams};
use sgad_core::sdp::{SolverOptions, SolverStatus};
use sgad_core::states::make_noisy;
use sgad_core::witness::{bisect_boundary, gmn, ThresholdResult, GMN_EPSILON};
use sgad_core::{DensityMatrix, Error, Family, NoisyFamilySpec, Result};

pub const DEFAULT_RESOLUTION: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scan {
    /// Vary α (or β) on the initial states.
    Initial { family: Family },
    /// Vary α (or β) on asymptotic states at fixed n and μ.
    AsymptoticParam { family: Family, n: f64, mu: f64 },
    /// Vary μ on asymptotic states at fixed parameter and n.
    AsymptoticMu { family: Family, param: f64, n: f64 },
}

impl Scan {
    fn state(&self, x: f64) -> Result<DensityMatrix> {
        match *self {
            Scan::Initial { family } => Ok(make_noisy(&NoisyFamilySpec::new(family, x)?)),
            Scan::AsymptoticParam { family, n, mu } => asymptotic(family, x, n, mu),
            Scan::AsymptoticMu { family, param, n } => asymptotic(family, param, n, x),
        }
    }

    pub fn variable(&self) -> &'static str {
        match *self {
            Scan::Initial { family } | Scan::AsymptoticParam { family, .. } => {
                if family.is_ghz() {
                    "alpha"
                } else {
                    "beta"
                }
            }
            Scan::AsymptoticMu { .. } => "mu",
        }
    }
}

fn asymptotic(family: Family, param: f64, n: f64, mu: f64) -> Result<DensityMatrix> {
    let rho = make_noisy(&NoisyFamilySpec::new(family, param)?);
    asymptotic_state(&rho, &SgadParams::unit_rate(n, 0.0)?, MemoryParam::new(mu)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub variable: &'static str,
    pub bracket: (f64, f64),
    /// `None` when gmn > ε holds on both ends or on neither.
    pub boundary: Option<f64>,
    pub lower: f64,
    pub upper: f64,
    pub gmn_lower: f64,
    pub gmn_upper: f64,
    pub evaluations: usize,
    /// Evaluations where the solver stopped short of its tolerances.
    pub untrusted: usize,
}

pub fn run(scan: Scan, bracket: (f64, f64), resolution: f64, solver: &SolverOptions) -> Result<ScanReport> {
    if !(resolution > 0.0) {
        return Err(Error::InvalidInput(format!("resolution must be positive, got {resolution}")));
    }
    let mut untrusted = 0;
    let mut evaluate = |x: f64| -> Result<f64> {
        let report = gmn(&scan.state(x)?, solver)?;
        if report.status != SolverStatus::Optimal {
            untrusted += 1;
        }
        Ok(report.value)
    };
    let result = bisect_boundary(&mut evaluate, bracket.0, bracket.1, GMN_EPSILON, resolution)?;
    let base = ScanReport {
        variable: scan.variable(),
        bracket,
        boundary: None,
        lower: bracket.0,
        upper: bracket.1,
        gmn_lower: 0.0,
        gmn_upper: 0.0,
        evaluations: 2,
        untrusted: 0,
    };
    let report = match result {
        ThresholdResult::Boundary {
            estimate,
            lower,
            upper,
            value_lower,
            value_upper,
            evaluations,
        } => ScanReport {
            boundary: Some(estimate),
            lower,
            upper,
            gmn_lower: value_lower,
            gmn_upper: value_upper,
            evaluations,
            ..base
        },
        ThresholdResult::NoThreshold {
            value_at_start,
            value_at_end,
        } => ScanReport {
            gmn_lower: value_at_start,
            gmn_upper: value_at_end,
            ..base
        },
    };
    Ok(ScanReport { untrusted, ..report })
}
