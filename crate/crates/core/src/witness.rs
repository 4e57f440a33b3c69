//! Entanglement detection and quantification for three qubits.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigenvalues, partial_transpose, trace_norm, Bipartition, ComplexMatrix};
use crate::sdp::{solve, SdpProblem, SolverOptions, SolverStatus};
use crate::states::{DensityMatrix, StateFile};

/// Partial-transpose eigenvalues at or above `-PPT_TOL` count as nonnegative.
pub const PPT_TOL: f64 = 1e-9;
/// GMN values above this are treated as genuine entanglement in scans.
pub const GMN_EPSILON: f64 = 1e-6;
const CRITERION_TOL: f64 = 1e-12;

/// `‖ρ^{T_M}‖₁ − 1`; equals 1 for pure GHZ states.
pub fn negativity(rho: &DensityMatrix, cut: Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), cut)?;
    Ok((trace_norm(&pt)? - 1.0).max(0.0))
}

pub fn negativities(rho: &DensityMatrix) -> Result<[f64; 3]> {
    Ok([
        negativity(rho, Bipartition::A)?,
        negativity(rho, Bipartition::B)?,
        negativity(rho, Bipartition::C)?,
    ])
}

pub fn is_ppt(rho: &DensityMatrix, cut: Bipartition) -> Result<bool> {
    let pt = partial_transpose(rho.matrix(), cut)?;
    Ok(hermitian_eigenvalues(&pt)?[0] >= -PPT_TOL)
}

/// Real orthogonal basis of 8×8 Hermitian matrices: `E_jj`, then
/// `E_jl + E_lj` and `i(E_jl − E_lj)` for `j < l`.
fn hermitian_basis(dim: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        let mut m = ComplexMatrix::zeros(dim);
        m[(j, j)] = Complex64::new(1.0, 0.0);
        basis.push(m);
    }
    for j in 0..dim {
        for l in (j + 1)..dim {
            let mut re = ComplexMatrix::zeros(dim);
            re[(j, l)] = Complex64::new(1.0, 0.0);
            re[(l, j)] = Complex64::new(1.0, 0.0);
            basis.push(re);
            let mut im = ComplexMatrix::zeros(dim);
            im[(j, l)] = Complex64::new(0.0, 1.0);
            im[(l, j)] = Complex64::new(0.0, -1.0);
            basis.push(im);
        }
    }
    basis
}

/// Genuine multipartite negativity with its certificate.
///
/// `value = 2·max(0, −raw_optimum)` where `raw_optimum = min tr(Wρ)` over
/// fully decomposable witnesses `W = P_M + Q_M^{T_M}` with
/// `0 ⪯ P_M, Q_M ⪯ I` for every cut M. Pure GHZ states give 1.
#[derive(Clone, Debug)]
pub struct GmnReport {
    pub value: f64,
    pub raw_optimum: f64,
    pub witness: ComplexMatrix,
    /// Negativities across A|BC, B|AC, C|AB.
    pub negativities: [f64; 3],
    pub status: SolverStatus,
    pub iterations: usize,
}

impl GmnReport {
    /// Whether the solver reached its tolerances.
    pub fn trusted(&self) -> bool {
        self.status == SolverStatus::Optimal
    }

    pub fn is_gme(&self) -> bool {
        self.value > GMN_EPSILON
    }

    /// Witness in the matrix state-file format.
    pub fn witness_json(&self) -> String {
        StateFile::from_matrix(&self.witness).to_json()
    }
}

/// Builds the witness program in inequality form over the coordinates of
/// `W` and `P_A, P_B, P_C` (4 × 64 reals). Each cut contributes the blocks
/// `P_M`, `I − P_M`, `Q_M = (W − P_M)^{T_M}` and `I − Q_M`.
pub fn gmn_problem(rho: &DensityMatrix) -> Result<SdpProblem> {
    if rho.dim() != 8 {
        return Err(Error::InvalidInput(format!("gmn needs a three-qubit state, got dim {}", rho.dim())));
    }
    let basis = hermitian_basis(8);
    let nb = basis.len();
    let transposed: Vec<Vec<ComplexMatrix>> = Bipartition::ALL
        .iter()
        .map(|&cut| basis.iter().map(|b| partial_transpose(b, cut)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut problem = SdpProblem::new(vec![8; 12]);
    let id = ComplexMatrix::identity(8);
    for m in 0..3 {
        problem.set_objective(4 * m + 1, id.clone());
        problem.set_objective(4 * m + 3, id.clone());
    }
    // W coordinates: maximize −tr(Wρ)
    for k in 0..nb {
        let rhs = -basis[k].trace_product(rho.matrix()).re;
        let mut terms = Vec::with_capacity(6);
        for m in 0..3 {
            terms.push((4 * m + 2, transposed[m][k].scale(-1.0)));
            terms.push((4 * m + 3, transposed[m][k].clone()));
        }
        problem.add_constraint(terms, rhs);
    }
    // P_M coordinates
    for m in 0..3 {
        for k in 0..nb {
            let terms = vec![
                (4 * m, basis[k].scale(-1.0)),
                (4 * m + 1, basis[k].clone()),
                (4 * m + 2, transposed[m][k].clone()),
                (4 * m + 3, transposed[m][k].scale(-1.0)),
            ];
            problem.add_constraint(terms, 0.0);
        }
    }
    Ok(problem)
}

pub fn gmn(rho: &DensityMatrix, opts: &SolverOptions) -> Result<GmnReport> {
    let problem = gmn_problem(rho)?;
    let sol = solve(&problem, opts)?;
    let basis = hermitian_basis(8);
    let mut witness = ComplexMatrix::zeros(8);
    for (k, b) in basis.iter().enumerate() {
        witness = &witness + &b.scale(sol.y[k]);
    }
    let raw_optimum = -sol.dual_objective;
    Ok(GmnReport {
        value: 2.0 * (-raw_optimum).max(0.0),
        raw_optimum,
        witness,
        negativities: negativities(rho)?,
        status: sol.status,
        iterations: sol.iterations,
    })
}

/// One of the four main-antidiagonal coherences, given by 1-based indices
/// `(i, 9 − i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AntidiagonalPair(usize);

impl AntidiagonalPair {
    pub const ALL: [AntidiagonalPair; 4] = [
        AntidiagonalPair(0),
        AntidiagonalPair(1),
        AntidiagonalPair(2),
        AntidiagonalPair(3),
    ];

    pub fn new(i: usize, j: usize) -> Result<Self> {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        if (1..=4).contains(&lo) && lo + hi == 9 {
            Ok(Self(lo - 1))
        } else {
            Err(Error::InvalidInput(format!(
                "({i},{j}) is not one of (1,8), (2,7), (3,6), (4,5)"
            )))
        }
    }

    /// 0-based row and column.
    pub fn indices(self) -> (usize, usize) {
        (self.0, 7 - self.0)
    }
}

impl fmt::Display for AntidiagonalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0 + 1, 8 - self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    pub margin: f64,
}

/// `|ρ_{i,9−i}| ≤ Σ √(ρ_kk ρ_ll)` over the other three antidiagonal pairs.
/// Violation certifies genuine entanglement of X-states.
pub fn xstate_criterion(rho: &DensityMatrix, pair: AntidiagonalPair) -> CriterionReport {
    let (i, j) = pair.indices();
    let lhs = rho.get(i, j).norm();
    let rhs: f64 = AntidiagonalPair::ALL
        .iter()
        .filter(|p| **p != pair)
        .map(|p| {
            let (k, l) = p.indices();
            (rho.get(k, k).re.max(0.0) * rho.get(l, l).re.max(0.0)).sqrt()
        })
        .sum();
    let margin = lhs - rhs;
    CriterionReport {
        lhs,
        rhs,
        violated: margin > CRITERION_TOL,
        margin,
    }
}

/// Largest margin over the four antidiagonal pairs.
pub fn xstate_best(rho: &DensityMatrix) -> (AntidiagonalPair, CriterionReport) {
    AntidiagonalPair::ALL
        .iter()
        .map(|&p| (p, xstate_criterion(rho, p)))
        .max_by(|a, b| a.1.margin.total_cmp(&b.1.margin))
        .expect("four pairs")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticCriterion {
    pub satisfied: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Closed-form biseparability condition for the t → ∞ image of the noisy
/// GHZ₁ family:
///
/// ```text
/// 3√((n²(1+n)(1−μ)/(1+2n)³ + μ(1−α)/8)(n(1+n)²(1−μ)/(1+2n)³ + μ(1−α)/8))
///     ≥ (n(1+n))^{3/2} α (1−μ)/(1+2n)³
/// ```
pub fn asymptotic_ghz1_criterion(alpha: f64, n: f64, mu: f64) -> Result<AsymptoticCriterion> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&mu) || !(n >= 0.0) || !n.is_finite() {
        return Err(Error::InvalidInput(format!(
            "need 0 ≤ α ≤ 1, 0 ≤ μ ≤ 1, n ≥ 0 (got α = {alpha}, μ = {mu}, n = {n})"
        )));
    }
    let z = (1.0 + 2.0 * n).powi(3);
    let noise = mu * (1.0 - alpha) / 8.0;
    let left = n * n * (1.0 + n) * (1.0 - mu) / z + noise;
    let right = n * (1.0 + n) * (1.0 + n) * (1.0 - mu) / z + noise;
    let lhs = 3.0 * (left * right).sqrt();
    let rhs = (n * (1.0 + n)).powf(1.5) * alpha * (1.0 - mu) / z;
    Ok(AsymptoticCriterion {
        satisfied: lhs >= rhs,
        lhs,
        rhs,
    })
}

/// Result of bisecting for the GMN > ε boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum ThresholdResult {
    Boundary {
        estimate: f64,
        /// Bracket endpoints after bisection and the GMN values there.
        lower: f64,
        upper: f64,
        value_lower: f64,
        value_upper: f64,
        evaluations: usize,
    },
    NoThreshold {
        value_at_start: f64,
        value_at_end: f64,
    },
}

impl ThresholdResult {
    pub fn estimate(&self) -> Option<f64> {
        match self {
            ThresholdResult::Boundary { estimate, .. } => Some(*estimate),
            ThresholdResult::NoThreshold { .. } => None,
        }
    }
}

/// Bisects `[start, end]` for the point where `f > epsilon` switches,
/// stopping once the bracket is no wider than `resolution`.
pub fn bisect_boundary(
    mut f: impl FnMut(f64) -> Result<f64>,
    start: f64,
    end: f64,
    epsilon: f64,
    resolution: f64,
) -> Result<ThresholdResult> {
    if !(start.is_finite() && end.is_finite()) || start == end || !(resolution > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad bracket [{start}, {end}] or resolution {resolution}"
        )));
    }
    let (mut lo, mut hi) = (start.min(end), start.max(end));
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    let mut evaluations = 2;
    let side_lo = f_lo > epsilon;
    if side_lo == (f_hi > epsilon) {
        return Ok(ThresholdResult::NoThreshold {
            value_at_start: f_lo,
            value_at_end: f_hi,
        });
    }
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        evaluations += 1;
        if (f_mid > epsilon) == side_lo {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(ThresholdResult::Boundary {
        estimate: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        value_lower: f_lo,
        value_upper: f_hi,
        evaluations,
    })
}
