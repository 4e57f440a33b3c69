//! Channel self-checks: Kraus completeness, complete positivity, and the
//! closed forms against the master-equation integrator.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sgad_core::channel::{
    apply_correlated, apply_uncorrelated, choi_matrix, default_step, integrate_master, kraus_completeness_residual,
    kraus_single, ChannelTime, ChoiMode, LindbladMode, LindbladSpec, MemoryParam, SgadParams, CP_TOL,
};
use sgad_core::states::{make_pure, random_density};
use sgad_core::{DensityMatrix, Family, Result};

pub const COMPLETENESS_LIMIT: f64 = 1e-10;
pub const ORACLE_LIMIT: f64 = 1e-6;
const ORACLE_STATES: usize = 4;
const ORACLE_SEED: u64 = 2024;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub omega_t: f64,
    /// Worst residual seen, or the smallest eigenvalue for CP checks.
    pub value: Option<f64>,
    pub limit: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        match (&self.value, &self.error) {
            (_, Some(e)) => write!(f, "{:<22} Ωt={:<8} {verdict}  {e}", self.name, self.omega_t),
            (Some(v), None) => write!(
                f,
                "{:<22} Ωt={:<8} {verdict}  value={v:.3e} limit={:.0e}",
                self.name, self.omega_t, self.limit
            ),
            (None, None) => write!(f, "{:<22} Ωt={:<8} {verdict}", self.name, self.omega_t),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub n: f64,
    pub m: f64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Worst value of the named check over the time grid.
    pub fn worst(&self, name: &str) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| c.name == name)
            .filter_map(|c| c.value)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }
}

fn oracle_states() -> Vec<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let mut states: Vec<DensityMatrix> = (0..ORACLE_STATES).map(|_| random_density(8, &mut rng)).collect();
    states.push(make_pure(Family::Ghz1));
    states.push(make_pure(Family::W));
    states
}

fn completeness(p: &SgadParams, t: ChannelTime, omega_t: f64) -> Check {
    match kraus_single(p, t) {
        Ok(k) => {
            let r = kraus_completeness_residual(&k);
            Check {
                name: "kraus-completeness",
                omega_t,
                value: Some(r),
                limit: COMPLETENESS_LIMIT,
                passed: r <= COMPLETENESS_LIMIT,
                error: None,
            }
        }
        Err(e) => Check {
            name: "kraus-completeness",
            omega_t,
            value: None,
            limit: COMPLETENESS_LIMIT,
            passed: false,
            error: Some(e.to_string()),
        },
    }
}

fn positivity(p: &SgadParams, t: ChannelTime, omega_t: f64) -> Vec<Check> {
    let modes: [(&'static str, ChoiMode); 3] = [
        ("choi-uncorrelated", ChoiMode::UncorrelatedSingle),
        ("choi-correlated", ChoiMode::Correlated),
        ("choi-memory", ChoiMode::Memory(MemoryParam::new(0.5).expect("μ in range"))),
    ];
    modes
        .into_iter()
        .map(|(name, mode)| match choi_matrix(p, t, mode) {
            Ok(report) => Check {
                name,
                omega_t,
                value: Some(report.min_eigenvalue),
                limit: -CP_TOL,
                passed: report.is_cp(),
                error: None,
            },
            Err(e) => Check {
                name,
                omega_t,
                value: None,
                limit: -CP_TOL,
                passed: false,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn oracle(p: &SgadParams, t: ChannelTime, omega_t: f64, states: &[DensityMatrix]) -> Vec<Check> {
    let dt = default_step(p);
    [("rk4-uncorrelated", LindbladMode::Uncorrelated), ("rk4-correlated", LindbladMode::Correlated)]
        .into_iter()
        .map(|(name, mode)| {
            let spec = LindbladSpec::new(*p, mode);
            let worst = states.iter().try_fold(0.0f64, |acc, rho| -> Result<f64> {
                let exact = match mode {
                    LindbladMode::Uncorrelated => apply_uncorrelated(rho, p, t)?,
                    LindbladMode::Correlated => apply_correlated(rho, p, t)?,
                };
                let numeric = integrate_master(rho, &spec, t, dt)?;
                Ok(acc.max(numeric.matrix().max_abs_diff(exact.matrix())))
            });
            match worst {
                Ok(w) => Check {
                    name,
                    omega_t,
                    value: Some(w),
                    limit: ORACLE_LIMIT,
                    passed: w <= ORACLE_LIMIT,
                    error: None,
                },
                Err(e) => Check {
                    name,
                    omega_t,
                    value: None,
                    limit: ORACLE_LIMIT,
                    passed: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Runs every check at each Ωt on the grid.
pub fn validate_channel(n: f64, m: f64, omega_ts: &[f64]) -> Result<ValidationReport> {
    let p = SgadParams::unit_rate(n, m)?;
    let states = oracle_states();
    let mut checks = Vec::new();
    for &omega_t in omega_ts {
        let t = ChannelTime::from_omega_t(omega_t, &p)?;
        checks.push(completeness(&p, t, omega_t));
        checks.extend(positivity(&p, t, omega_t));
        checks.extend(oracle(&p, t, omega_t, &states));
    }
    Ok(ValidationReport { n, m, checks })
}
