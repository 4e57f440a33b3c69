//! Grid sweeps over asymptotic and finite-time states.

use rayon::prelude::*;
use serde::Serialize;
use sgad_core::channel::{apply_memory, asymptotic_state, ChannelTime, MemoryParam, SgadParams};
use sgad_core::matcore::hermitian_eigenvalues;
use sgad_core::sdp::{SolverOptions, SolverStatus};
use sgad_core::states::make_noisy;
use sgad_core::witness::{gmn, negativities, xstate_best};
use sgad_core::{DensityMatrix, Error, Family, NoisyFamilySpec, Result};

use crate::{error_code, exit, status_code};

/// Finite Ωt used in place of t = ∞ when evolving.
pub const DEFAULT_OMEGA_T: f64 = 60.0;
pub const DEFAULT_MU_STEP: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measures {
    pub gmn: bool,
    pub negativities: bool,
    pub xstate: bool,
}

impl Measures {
    pub const ALL: Measures = Measures {
        gmn: true,
        negativities: true,
        xstate: true,
    };

    /// Comma-separated subset of `gmn`, `neg`, `xstate`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m = Measures {
            gmn: false,
            negativities: false,
            xstate: false,
        };
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "gmn" => m.gmn = true,
                "neg" | "negativities" => m.negativities = true,
                "xstate" => m.xstate = true,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown measure '{other}' (expected gmn, neg, xstate)"
                    )))
                }
            }
        }
        if m == (Measures { gmn: false, negativities: false, xstate: false }) {
            return Err(Error::InvalidInput("no measures selected".into()));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TimeSpec {
    Finite(Vec<f64>),
    Asymptotic,
}

/// Initial state of a sweep.
#[derive(Clone, Debug)]
pub enum Source {
    /// One row group per family parameter (α for GHZ, β for W).
    Family { family: Family, params: Vec<f64> },
    /// Explicit state, e.g. read from a file.
    State(DensityMatrix),
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub source: Source,
    pub ns: Vec<f64>,
    pub ms: Vec<f64>,
    pub mus: Vec<f64>,
    pub time: TimeSpec,
    pub measures: Measures,
    pub workers: usize,
    pub solver: SolverOptions,
}

impl SweepConfig {
    /// Asymptotic sweep with the default μ grid `0:1:0.01`.
    pub fn asymptotic(family: Family, params: Vec<f64>, ns: Vec<f64>) -> Self {
        SweepConfig {
            source: Source::Family { family, params },
            ns,
            ms: vec![0.0],
            mus: crate::grid::range(0.0, 1.0, DEFAULT_MU_STEP).expect("default grid"),
            time: TimeSpec::Asymptotic,
            measures: Measures::ALL,
            workers: 1,
            solver: SolverOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty = |name: &str, v: &[f64]| {
            if v.is_empty() {
                Err(Error::InvalidInput(format!("{name} grid is empty")))
            } else {
                Ok(())
            }
        };
        nonempty("n", &self.ns)?;
        nonempty("m", &self.ms)?;
        nonempty("μ", &self.mus)?;
        if let Source::Family { family, params } = &self.source {
            nonempty(if family.is_ghz() { "α" } else { "β" }, params)?;
            for &x in params {
                NoisyFamilySpec::new(*family, x)?;
            }
        }
        for &n in &self.ns {
            for &m in &self.ms {
                SgadParams::unit_rate(n, m)?;
            }
        }
        for &mu in &self.mus {
            MemoryParam::new(mu)?;
        }
        if let TimeSpec::Finite(ts) = &self.time {
            nonempty("Ωt", ts)?;
            for &t in ts {
                if !(t >= 0.0) || !t.is_finite() {
                    return Err(Error::InvalidInput(format!("Ωt must be finite and ≥ 0, got {t}")));
                }
            }
        }
        if self.workers == 0 {
            return Err(Error::InvalidInput("need at least one worker".into()));
        }
        if !(self.solver.tol > 0.0) {
            return Err(Error::InvalidInput(format!("solver tolerance must be positive, got {}", self.solver.tol)));
        }
        Ok(())
    }

    /// Grid points in output order: μ ascending, then parameter, n, m and Ωt.
    fn points(&self) -> Vec<Point> {
        let params: Vec<Option<f64>> = match &self.source {
            Source::Family { params, .. } => params.iter().copied().map(Some).collect(),
            Source::State(_) => vec![None],
        };
        let times: Vec<Option<f64>> = match &self.time {
            TimeSpec::Finite(ts) => {
                let mut ts = ts.clone();
                ts.sort_by(f64::total_cmp);
                ts.into_iter().map(Some).collect()
            }
            TimeSpec::Asymptotic => vec![None],
        };
        let ms: &[f64] = match self.time {
            TimeSpec::Asymptotic => &[0.0],
            TimeSpec::Finite(_) => &self.ms,
        };
        let mut mus = self.mus.clone();
        mus.sort_by(f64::total_cmp);
        let mut out = Vec::new();
        for &mu in &mus {
            for &param in &params {
                for &n in &self.ns {
                    for &m in ms {
                        for &omega_t in &times {
                            out.push(Point { param, n, m, mu, omega_t });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Point {
    param: Option<f64>,
    n: f64,
    m: f64,
    mu: f64,
    omega_t: Option<f64>,
}

/// Measures at one grid point. Fields are `None` when not requested or
/// when the point failed.
#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub gmn: Option<f64>,
    pub negativities: Option<[f64; 3]>,
    pub xstate_margin: Option<f64>,
    pub trace: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// Solver status of the gmn program, if one was run.
    Done(Option<SolverStatus>),
    Failed { message: String, code: i32 },
}

impl Outcome {
    pub fn label(&self) -> String {
        match self {
            Outcome::Done(Some(s)) => s.as_str().to_string(),
            Outcome::Done(None) => "ok".to_string(),
            Outcome::Failed { message, .. } => format!("error: {message}"),
        }
    }

    pub fn code(&self) -> i32 {
        match self {
            Outcome::Done(Some(s)) => status_code(*s),
            Outcome::Done(None) => exit::SUCCESS,
            Outcome::Failed { code, .. } => *code,
        }
    }
}

fn failed(e: Error) -> PointResult {
    PointResult {
        gmn: None,
        negativities: None,
        xstate_margin: None,
        trace: None,
        min_eigenvalue: None,
        outcome: Outcome::Failed {
            message: e.to_string(),
            code: error_code(&e),
        },
    }
}

/// Measures `rho` as requested.
pub fn measure(rho: &DensityMatrix, measures: Measures, solver: &SolverOptions) -> PointResult {
    let run = || -> Result<PointResult> {
        let report = if measures.gmn { Some(gmn(rho, solver)?) } else { None };
        let negs = if measures.negativities { Some(negativities(rho)?) } else { None };
        Ok(PointResult {
            gmn: report.as_ref().map(|r| r.value),
            negativities: negs,
            xstate_margin: measures.xstate.then(|| xstate_best(rho).1.margin),
            trace: Some(rho.matrix().trace().re),
            min_eigenvalue: Some(hermitian_eigenvalues(rho.matrix())?[0]),
            outcome: Outcome::Done(report.map(|r| r.status)),
        })
    };
    run().unwrap_or_else(failed)
}

fn initial_state(source: &Source, param: Option<f64>) -> Result<DensityMatrix> {
    match (source, param) {
        (Source::Family { family, .. }, Some(x)) => Ok(make_noisy(&NoisyFamilySpec::new(*family, x)?)),
        (Source::State(rho), _) => Ok(rho.clone()),
        (Source::Family { .. }, None) => unreachable!("family points carry a parameter"),
    }
}

fn evaluate(cfg: &SweepConfig, pt: &Point) -> PointResult {
    let state = || -> Result<DensityMatrix> {
        let rho = initial_state(&cfg.source, pt.param)?;
        let p = SgadParams::unit_rate(pt.n, pt.m)?;
        let mem = MemoryParam::new(pt.mu)?;
        match pt.omega_t {
            None => asymptotic_state(&rho, &p, mem),
            Some(omega_t) => apply_memory(&rho, &p, ChannelTime::from_omega_t(omega_t, &p)?, mem),
        }
    };
    match state() {
        Ok(rho) => measure(&rho, cfg.measures, &cfg.solver),
        Err(e) => failed(e),
    }
}

/// One output row; the column set depends on the sweep kind.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub family: String,
    pub param: Option<f64>,
    pub n: f64,
    pub m: f64,
    pub mu: f64,
    pub omega_t: Option<f64>,
    pub result: PointResult,
}

#[derive(Serialize)]
pub struct AsymptoticRecord {
    pub family: String,
    pub param: Option<f64>,
    pub n: f64,
    pub mu: f64,
    pub gmn: Option<f64>,
    #[serde(rename = "neg_A_BC")]
    pub neg_a_bc: Option<f64>,
    #[serde(rename = "neg_B_AC")]
    pub neg_b_ac: Option<f64>,
    #[serde(rename = "neg_C_AB")]
    pub neg_c_ab: Option<f64>,
    pub xstate_margin: Option<f64>,
    pub status: String,
}

#[derive(Serialize)]
pub struct EvolveRecord {
    pub family: String,
    pub param: Option<f64>,
    pub n: f64,
    pub m: f64,
    pub mu: f64,
    pub omega_t: f64,
    pub gmn: Option<f64>,
    #[serde(rename = "neg_A_BC")]
    pub neg_a_bc: Option<f64>,
    #[serde(rename = "neg_B_AC")]
    pub neg_b_ac: Option<f64>,
    #[serde(rename = "neg_C_AB")]
    pub neg_c_ab: Option<f64>,
    pub xstate_margin: Option<f64>,
    pub trace: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub status: String,
}

impl SweepRow {
    fn neg(&self, k: usize) -> Option<f64> {
        self.result.negativities.map(|n| n[k])
    }

    pub fn asymptotic_record(&self) -> AsymptoticRecord {
        AsymptoticRecord {
            family: self.family.clone(),
            param: self.param,
            n: self.n,
            mu: self.mu,
            gmn: self.result.gmn,
            neg_a_bc: self.neg(0),
            neg_b_ac: self.neg(1),
            neg_c_ab: self.neg(2),
            xstate_margin: self.result.xstate_margin,
            status: self.result.outcome.label(),
        }
    }

    pub fn evolve_record(&self) -> EvolveRecord {
        EvolveRecord {
            family: self.family.clone(),
            param: self.param,
            n: self.n,
            m: self.m,
            mu: self.mu,
            omega_t: self.omega_t.unwrap_or(f64::INFINITY),
            gmn: self.result.gmn,
            neg_a_bc: self.neg(0),
            neg_b_ac: self.neg(1),
            neg_c_ab: self.neg(2),
            xstate_margin: self.result.xstate_margin,
            trace: self.result.trace,
            min_eigenvalue: self.result.min_eigenvalue,
            status: self.result.outcome.label(),
        }
    }
}

/// Evaluates every grid point on a pool of `cfg.workers` threads. Rows come
/// back in grid order whatever the worker count.
pub fn run(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let family = match &cfg.source {
        Source::Family { family, .. } => family.name().to_string(),
        Source::State(_) => "state".to_string(),
    };
    let points = cfg.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let results: Vec<PointResult> = pool.install(|| points.par_iter().map(|pt| evaluate(cfg, pt)).collect());
    Ok(points
        .into_iter()
        .zip(results)
        .map(|(pt, result)| SweepRow {
            family: family.clone(),
            param: pt.param,
            n: pt.n,
            m: pt.m,
            mu: pt.mu,
            omega_t: pt.omega_t,
            result,
        })
        .collect())
}

/// Exit code of the first failing row, or 0.
pub fn exit_code(rows: &[SweepRow]) -> i32 {
    rows.iter()
        .map(|r| r.result.outcome.code())
        .find(|&c| c != exit::SUCCESS)
        .unwrap_or(exit::SUCCESS)
}

/// Smallest μ on the grid above which every row has gmn > ε, per parameter.
pub fn onset(rows: &[SweepRow], param: f64, n: f64, epsilon: f64) -> Option<f64> {
    let curve: Vec<&SweepRow> = rows.iter().filter(|r| r.param == Some(param) && r.n == n).collect();
    let mut first = None;
    for r in curve.iter().rev() {
        match r.result.gmn {
            Some(v) if v > epsilon => first = Some(r.mu),
            _ => break,
        }
    }
    first
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(family: Family, params: Vec<f64>) -> SweepConfig {
        let mut cfg = SweepConfig::asymptotic(family, params, vec![1.0]);
        cfg.mus = vec![1.0, 0.0, 0.5];
        cfg
    }

    #[test]
    fn rows_are_sorted_by_mu() {
        let mut cfg = small(Family::Ghz2, vec![1.0, 0.5]);
        cfg.measures = Measures::parse("neg,xstate").unwrap();
        let rows = run(&cfg).unwrap();
        let order: Vec<(f64, Option<f64>)> = rows.iter().map(|r| (r.mu, r.param)).collect();
        assert_eq!(
            order,
            vec![(0.0, Some(1.0)), (0.0, Some(0.5)), (0.5, Some(1.0)), (0.5, Some(0.5)), (1.0, Some(1.0)), (1.0, Some(0.5))]
        );
        assert!(rows.iter().all(|r| r.result.gmn.is_none() && r.result.outcome == Outcome::Done(None)));
        // GHZ₂ sits in the invariant block: μ = 1 keeps the pure state
        assert!((rows[4].result.negativities.unwrap()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_config_is_input_error() {
        let mut cfg = small(Family::Ghz1, vec![1.5]);
        assert!(matches!(run(&cfg), Err(Error::InvalidInput(_))));
        cfg = small(Family::Ghz1, vec![1.0]);
        cfg.mus = vec![];
        assert!(matches!(run(&cfg), Err(Error::InvalidInput(_))));
        cfg = small(Family::Ghz1, vec![1.0]);
        cfg.ns = vec![-1.0];
        assert!(run(&cfg).is_err());
        assert!(Measures::parse("gmn,foo").is_err());
    }

    #[test]
    fn onset_reads_the_tail() {
        let mut cfg = small(Family::Ghz2, vec![1.0]);
        cfg.mus = vec![0.0, 0.5, 1.0];
        cfg.measures = Measures::parse("gmn").unwrap();
        let rows = run(&cfg).unwrap();
        assert_eq!(exit_code(&rows), 0);
        let mu = onset(&rows, 1.0, 1.0, 1e-6).unwrap();
        assert!(mu <= 0.5);
    }
}
