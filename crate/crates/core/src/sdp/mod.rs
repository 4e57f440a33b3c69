//! Dense primal-dual interior-point solver for small block-diagonal
//! semidefinite programs.
//!
//! Primal: minimize `Σ_b tr(C_b X_b)` subject to `Σ_b tr(A_ib X_b) = b_i`,
//! `X_b ⪰ 0`. Dual: maximize `bᵀy` subject to `S_b = C_b − Σᵢ yᵢ A_ib ⪰ 0`.
//!
//! Hermitian blocks are solved through the real symmetric embedding
//! `H ↦ ½[[Re H, −Im H], [Im H, Re H]]`; blocks whose data are all real are
//! kept at their native size. The search direction is HKM with Mehrotra's
//! predictor-corrector, started from `X = S = I`, `y = 0`.

mod dense;

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;

pub(crate) use dense::{cholesky_solve, Mat};

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, HERMITIAN_TOL};

const STEP_FRACTION: f64 = 0.98;
const DEPENDENCY_TOL: f64 = 1e-9;

/// `Σ_b tr(A_b X_b) = rhs`, with `terms` listing the nonzero blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpConstraint {
    pub terms: Vec<(usize, ComplexMatrix)>,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    pub objective: Vec<ComplexMatrix>,
    pub constraints: Vec<SdpConstraint>,
}

impl SdpProblem {
    /// Problem with the given Hermitian block sizes, zero objective and no constraints.
    pub fn new(block_dims: Vec<usize>) -> Self {
        let objective = block_dims.iter().map(|&d| ComplexMatrix::zeros(d)).collect();
        Self {
            block_dims,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn set_objective(&mut self, block: usize, c: ComplexMatrix) {
        self.objective[block] = c;
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, ComplexMatrix)>, rhs: f64) {
        self.constraints.push(SdpConstraint { terms, rhs });
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_dims.is_empty() || self.block_dims.contains(&0) {
            return Err(Error::InvalidInput("SDP needs at least one nonempty block".into()));
        }
        if self.objective.len() != self.block_dims.len() {
            return Err(Error::InvalidInput(format!(
                "{} objective blocks for {} variable blocks",
                self.objective.len(),
                self.block_dims.len()
            )));
        }
        let check = |what: String, m: &ComplexMatrix, dim: usize| -> Result<()> {
            if m.dim() != dim {
                return Err(Error::InvalidInput(format!("{what} is {}×{}, block is {dim}×{dim}", m.dim(), m.dim())));
            }
            let dev = m.hermitian_deviation();
            if dev > HERMITIAN_TOL {
                return Err(Error::InvalidInput(format!("{what} is not Hermitian (deviation {dev:.3e})")));
            }
            Ok(())
        };
        for (b, c) in self.objective.iter().enumerate() {
            check(format!("objective block {b}"), c, self.block_dims[b])?;
        }
        for (i, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(Error::InvalidInput(format!("constraint {i} has non-finite rhs")));
            }
            for (b, a) in &con.terms {
                let dim = *self.block_dims.get(*b).ok_or_else(|| {
                    Error::InvalidInput(format!("constraint {i} refers to missing block {b}"))
                })?;
                check(format!("constraint {i} block {b}"), a, dim)?;
            }
        }
        Ok(())
    }

    /// Plain-text sparse listing of the problem.
    ///
    /// Layout: constraint count, block count, block sizes, right-hand sides,
    /// then one line `constraint block row col value` per upper-triangle
    /// nonzero (1-based, constraint 0 is the objective). Complex entries
    /// carry an extra imaginary-part column.
    pub fn to_sdpa(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\"sgad SDP: minimize sum tr(C_b X_b)\"");
        let _ = writeln!(out, "{}", self.constraints.len());
        let _ = writeln!(out, "{}", self.block_dims.len());
        let dims: Vec<String> = self.block_dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "{}", dims.join(" "));
        let rhs: Vec<String> = self.constraints.iter().map(|c| format!("{:e}", c.rhs)).collect();
        let _ = writeln!(out, "{}", rhs.join(" "));
        let mut emit = |idx: usize, block: usize, m: &ComplexMatrix| {
            for r in 0..m.dim() {
                for c in r..m.dim() {
                    let z = m[(r, c)];
                    if z.re != 0.0 || z.im != 0.0 {
                        if z.im == 0.0 {
                            let _ = writeln!(out, "{idx} {} {} {} {:e}", block + 1, r + 1, c + 1, z.re);
                        } else {
                            let _ = writeln!(out, "{idx} {} {} {} {:e} {:e}", block + 1, r + 1, c + 1, z.re, z.im);
                        }
                    }
                }
            }
        };
        for (b, c) in self.objective.iter().enumerate() {
            emit(0, b, c);
        }
        for (i, con) in self.constraints.iter().enumerate() {
            for (b, a) in &con.terms {
                emit(i + 1, *b, a);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 100 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
}

impl SolverStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::MaxIterations => "max-iterations",
            SolverStatus::NumericalFailure => "numerical-failure",
        }
    }
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Snapshot taken at the start of each iteration.
///
/// For any iterate, `dual − primal = yᵀr_p − ⟨R_d, X⟩ − ⟨X, S⟩`, so
/// `dual ≤ primal + |yᵀr_p| + |⟨R_d, X⟩|` holds exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub complementarity: f64,
    /// `|yᵀ(b − 𝒜(X))|`.
    pub primal_residual_term: f64,
    /// `|⟨C − S − 𝒜*(y), X⟩|`.
    pub dual_residual_term: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub x: Vec<ComplexMatrix>,
    /// One entry per input constraint; dropped dependent constraints get 0.
    pub y: Vec<f64>,
    pub s: Vec<ComplexMatrix>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `primal − dual`.
    pub duality_gap: f64,
    /// `‖b − 𝒜(X)‖ / (1 + ‖b‖)`.
    pub primal_infeasibility: f64,
    /// `‖C − S − 𝒜*(y)‖_F / (1 + ‖C‖_F)`.
    pub dual_infeasibility: f64,
    pub iterations: usize,
    pub status: SolverStatus,
    pub dropped_constraints: usize,
    pub history: Vec<IterationRecord>,
}

impl SdpSolution {
    pub fn relative_gap(&self) -> f64 {
        self.duality_gap.abs() / (1.0 + self.primal_objective.abs() + self.dual_objective.abs())
    }
}

/// Symmetric sparse matrix listing every nonzero (both triangles).
#[derive(Clone, Debug, Default)]
struct Sparse {
    entries: Vec<(usize, usize, f64)>,
}

impl Sparse {
    fn dot_dense(&self, m: &Mat) -> f64 {
        self.entries.iter().map(|&(r, c, v)| v * m[(r, c)]).sum()
    }

    fn add_to(&self, s: f64, m: &mut Mat) {
        for &(r, c, v) in &self.entries {
            m[(r, c)] += s * v;
        }
    }

    /// `X · A` for dense `X`.
    fn left_mul(&self, x: &Mat) -> Mat {
        let n = x.n();
        let mut out = Mat::zeros(n);
        for &(r, c, v) in &self.entries {
            for p in 0..n {
                out[(p, c)] += x[(p, r)] * v;
            }
        }
        out
    }
}

fn embed_entries(m: &ComplexMatrix, complex: bool) -> Vec<(usize, usize, f64)> {
    let d = m.dim();
    let mut out = Vec::new();
    for r in 0..d {
        for c in 0..d {
            let z = m[(r, c)];
            if complex {
                if z.re != 0.0 {
                    out.push((r, c, 0.5 * z.re));
                    out.push((r + d, c + d, 0.5 * z.re));
                }
                if z.im != 0.0 {
                    out.push((r, c + d, -0.5 * z.im));
                    out.push((r + d, c, 0.5 * z.im));
                }
            } else if z.re != 0.0 {
                out.push((r, c, z.re));
            }
        }
    }
    out
}

fn embed_dense(m: &ComplexMatrix, complex: bool) -> Mat {
    let d = m.dim();
    let mut out = Mat::zeros(if complex { 2 * d } else { d });
    for (r, c, v) in embed_entries(m, complex) {
        out[(r, c)] += v;
    }
    out
}

/// Inverse of the embedding. `dual_scale` is 1 for slack-type matrices
/// (embedded with the ½ factor) and ½ for primal variables.
fn extract(m: &Mat, d: usize, complex: bool, primal: bool) -> ComplexMatrix {
    if !complex {
        return ComplexMatrix::from_fn(d, |r, c| Complex64::new(m[(r, c)], 0.0));
    }
    let s = if primal { 0.5 } else { 1.0 };
    ComplexMatrix::from_fn(d, |r, c| {
        Complex64::new(
            s * (m[(r, c)] + m[(r + d, c + d)]),
            s * (m[(r + d, c)] - m[(r, c + d)]),
        )
    })
}

struct RealProblem {
    dims: Vec<usize>,
    complex: Vec<bool>,
    c: Vec<Mat>,
    /// Kept constraints, each as (block, matrix) terms.
    a: Vec<Vec<(usize, Sparse)>>,
    b: Vec<f64>,
    kept: Vec<usize>,
    /// For each block, the (kept constraint, term) pairs touching it.
    users: Vec<Vec<(usize, usize)>>,
}

impl RealProblem {
    fn build(p: &SdpProblem) -> Self {
        let nb = p.block_dims.len();
        let complex: Vec<bool> = (0..nb)
            .map(|b| {
                let has_imag = |m: &ComplexMatrix| m.as_slice().iter().any(|z| z.im != 0.0);
                has_imag(&p.objective[b])
                    || p.constraints.iter().any(|con| con.terms.iter().any(|(bb, a)| *bb == b && has_imag(a)))
            })
            .collect();
        let dims: Vec<usize> = (0..nb)
            .map(|b| if complex[b] { 2 * p.block_dims[b] } else { p.block_dims[b] })
            .collect();
        let c = (0..nb).map(|b| embed_dense(&p.objective[b], complex[b])).collect();

        // merge duplicate block terms so each constraint lists a block once
        let all: Vec<Vec<(usize, Sparse)>> = p
            .constraints
            .iter()
            .map(|con| {
                let mut per_block: BTreeMap<usize, BTreeMap<(usize, usize), f64>> = BTreeMap::new();
                for (b, a) in &con.terms {
                    let slot = per_block.entry(*b).or_default();
                    for (r, c, v) in embed_entries(a, complex[*b]) {
                        *slot.entry((r, c)).or_default() += v;
                    }
                }
                per_block
                    .into_iter()
                    .map(|(b, entries)| {
                        let entries = entries.into_iter().filter(|(_, v)| *v != 0.0).map(|((r, c), v)| (r, c, v)).collect();
                        (b, Sparse { entries })
                    })
                    .filter(|(_, s)| !s.entries.is_empty())
                    .collect()
            })
            .collect();

        let kept = independent_rows(&all);
        let a: Vec<Vec<(usize, Sparse)>> = kept.iter().map(|&i| all[i].clone()).collect();
        let b = kept.iter().map(|&i| p.constraints[i].rhs).collect();
        let mut users = vec![Vec::new(); nb];
        for (i, terms) in a.iter().enumerate() {
            for (t, (blk, _)) in terms.iter().enumerate() {
                users[*blk].push((i, t));
            }
        }
        Self { dims, complex, c, a, b, kept, users }
    }

    fn m(&self) -> usize {
        self.a.len()
    }

    fn apply_a(&self, blocks: &[Mat]) -> Vec<f64> {
        self.a
            .iter()
            .map(|terms| terms.iter().map(|(b, s)| s.dot_dense(&blocks[*b])).sum())
            .collect()
    }

    fn apply_at(&self, y: &[f64]) -> Vec<Mat> {
        let mut out: Vec<Mat> = self.dims.iter().map(|&d| Mat::zeros(d)).collect();
        for (yi, terms) in y.iter().zip(&self.a) {
            if *yi == 0.0 {
                continue;
            }
            for (b, s) in terms {
                s.add_to(*yi, &mut out[*b]);
            }
        }
        out
    }

    /// `M_ij = Σ_b tr(A_ib X_b A_jb Z_b)`.
    fn schur(&self, x: &[Mat], z: &[Mat]) -> Mat {
        let m = self.m();
        let mut out = Mat::zeros(m);
        for (blk, users) in self.users.iter().enumerate() {
            let g: Vec<Mat> = users
                .iter()
                .map(|&(j, t)| self.a[j][t].1.left_mul(&x[blk]).matmul(&z[blk]))
                .collect();
            for (ii, &(i, ti)) in users.iter().enumerate() {
                let ai = &self.a[i][ti].1;
                for (jj, &(j, _)) in users.iter().enumerate().take(ii + 1) {
                    let gj = &g[jj];
                    let v: f64 = ai.entries.iter().map(|&(r, c, val)| val * gj[(c, r)]).sum();
                    out[(i, j)] += v;
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                out[(j, i)] = out[(i, j)];
            }
        }
        out
    }
}

/// Indices of constraints kept by sequential Gram-Schmidt; a row whose
/// residual norm falls below `DEPENDENCY_TOL` times its own norm is dropped.
fn independent_rows(rows: &[Vec<(usize, Sparse)>]) -> Vec<usize> {
    let vectors: Vec<Vec<(usize, usize, usize, f64)>> = rows
        .iter()
        .map(|terms| {
            let mut v: Vec<(usize, usize, usize, f64)> = terms
                .iter()
                .flat_map(|(b, s)| s.entries.iter().map(move |&(r, c, val)| (*b, r, c, val)))
                .collect();
            v.sort_by_key(|a| (a.0, a.1, a.2));
            v
        })
        .collect();
    let dot = |a: &[(usize, usize, usize, f64)], b: &[(usize, usize, usize, f64)]| {
        let (mut i, mut j, mut s) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            let ka = (a[i].0, a[i].1, a[i].2);
            let kb = (b[j].0, b[j].1, b[j].2);
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += a[i].3 * b[j].3;
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    };

    let mut kept: Vec<usize> = Vec::new();
    // coefficients of each kept row in the orthonormal basis built so far
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let norm2 = dot(v, v);
        if norm2 == 0.0 {
            continue;
        }
        let mut coeffs = Vec::with_capacity(kept.len() + 1);
        for (k, &j) in kept.iter().enumerate() {
            let mut r = dot(v, &vectors[j]);
            for (l, c) in coeffs.iter().enumerate() {
                r -= c * basis[k][l];
            }
            coeffs.push(r / basis[k][k]);
        }
        let resid = norm2 - coeffs.iter().map(|c| c * c).sum::<f64>();
        if resid > DEPENDENCY_TOL * DEPENDENCY_TOL * norm2 {
            coeffs.push(resid.sqrt());
            basis.push(coeffs);
            kept.push(i);
        }
    }
    kept
}

fn dot_blocks(a: &[Mat], b: &[Mat]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest α with `X + α·D ⪰ 0` (infinite if `D ⪰ 0`), or `None` if `X`
/// is not positive definite.
fn max_step(x: &[Mat], d: &[Mat]) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(d) {
        let li = xb.cholesky()?.lower_inverse();
        let t = li.matmul(db).matmul(&li.transpose());
        let min = t.sym_eigenvalues()[0];
        if !min.is_finite() {
            return None;
        }
        if min < 0.0 {
            alpha = alpha.min(-1.0 / min);
        }
    }
    Some(alpha)
}

/// Cholesky factor of the Schur complement. Near the optimum it is
/// positive definite in exact arithmetic but may fail numerically; retry
/// with a growing diagonal shift relative to its largest diagonal entry.
fn regularized_cholesky(m: &Mat) -> Option<Mat> {
    if let Some(l) = m.cholesky() {
        return Some(l);
    }
    let scale = (0..m.n()).map(|i| m[(i, i)].abs()).fold(0.0, f64::max);
    for shift in [1e-14, 1e-12, 1e-10] {
        let mut shifted = m.clone();
        for i in 0..m.n() {
            shifted[(i, i)] += shift * scale;
        }
        if let Some(l) = shifted.cholesky() {
            return Some(l);
        }
    }
    None
}

struct Direction {
    dx: Vec<Mat>,
    dy: Vec<f64>,
    ds: Vec<Mat>,
}

pub fn solve(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::InvalidInput(format!(
            "solver needs tol > 0 and max_iter ≥ 1 (got {} and {})",
            opts.tol, opts.max_iter
        )));
    }
    let rp = RealProblem::build(problem);
    let m = rp.m();
    let n_total: usize = rp.dims.iter().sum();
    let b_norm = norm(&rp.b);
    let c_norm = rp.c.iter().map(|c| c.dot(c)).sum::<f64>().sqrt();

    let mut x: Vec<Mat> = rp.dims.iter().map(|&d| Mat::identity(d)).collect();
    let mut s: Vec<Mat> = x.clone();
    let mut y = vec![0.0; m];
    let mut history = Vec::new();
    let mut status = SolverStatus::MaxIterations;
    let mut iterations = 0;

    loop {
        let ax = rp.apply_a(&x);
        let r_p: Vec<f64> = rp.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let aty = rp.apply_at(&y);
        let r_d: Vec<Mat> = (0..rp.dims.len())
            .map(|k| {
                let mut r = rp.c[k].clone();
                r.add_scaled(-1.0, &s[k]);
                r.add_scaled(-1.0, &aty[k]);
                r
            })
            .collect();
        let pobj = dot_blocks(&rp.c, &x);
        let dobj: f64 = rp.b.iter().zip(&y).map(|(b, y)| b * y).sum();
        let xs = dot_blocks(&x, &s);
        let mu = xs / n_total as f64;
        let pinf = norm(&r_p) / (1.0 + b_norm);
        let dinf = r_d.iter().map(|r| r.dot(r)).sum::<f64>().sqrt() / (1.0 + c_norm);
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        history.push(IterationRecord {
            iteration: iterations,
            primal_objective: pobj,
            dual_objective: dobj,
            complementarity: xs,
            primal_residual_term: y.iter().zip(&r_p).map(|(a, b)| a * b).sum::<f64>().abs(),
            dual_residual_term: dot_blocks(&r_d, &x).abs(),
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
        });
        if !(pobj.is_finite() && dobj.is_finite() && mu.is_finite()) {
            status = SolverStatus::NumericalFailure;
            break;
        }
        if rel_gap <= opts.tol && pinf <= opts.tol && dinf <= opts.tol {
            status = SolverStatus::Optimal;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let Some(z) = s.iter().map(Mat::spd_inverse).collect::<Option<Vec<Mat>>>() else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let Some(chol) = regularized_cholesky(&rp.schur(&x, &z)) else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let xrdz: Vec<Mat> = (0..x.len()).map(|k| x[k].matmul(&r_d[k]).matmul(&z[k])).collect();
        let a_xrdz = rp.apply_a(&xrdz);
        let a_z = rp.apply_a(&z);

        let direction = |sigma: f64, corr: Option<&[Mat]>| -> Direction {
            let a_corr = corr.map(|c| rp.apply_a(c));
            let rhs: Vec<f64> = (0..m)
                .map(|i| {
                    rp.b[i] - sigma * mu * a_z[i] + a_xrdz[i] + a_corr.as_ref().map_or(0.0, |v| v[i])
                })
                .collect();
            let dy = cholesky_solve(&chol, &rhs);
            let atdy = rp.apply_at(&dy);
            let ds: Vec<Mat> = (0..x.len())
                .map(|k| {
                    let mut d = r_d[k].clone();
                    d.add_scaled(-1.0, &atdy[k]);
                    d
                })
                .collect();
            let dx: Vec<Mat> = (0..x.len())
                .map(|k| {
                    let mut d = z[k].scaled(sigma * mu);
                    d.add_scaled(-1.0, &x[k]);
                    d.add_scaled(-1.0, &x[k].matmul(&ds[k]).matmul(&z[k]));
                    if let Some(c) = corr {
                        d.add_scaled(-1.0, &c[k]);
                    }
                    d.symmetrize();
                    d
                })
                .collect();
            Direction { dx, dy, ds }
        };

        let pred = direction(0.0, None);
        let (Some(ap), Some(ad)) = (max_step(&x, &pred.dx), max_step(&s, &pred.ds)) else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mut mu_aff = 0.0;
        for k in 0..x.len() {
            let mut xa = x[k].clone();
            xa.add_scaled(ap, &pred.dx[k]);
            let mut sa = s[k].clone();
            sa.add_scaled(ad, &pred.ds[k]);
            mu_aff += xa.dot(&sa);
        }
        mu_aff /= n_total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let corr: Vec<Mat> = (0..x.len())
            .map(|k| pred.dx[k].matmul(&pred.ds[k]).matmul(&z[k]))
            .collect();

        let step = direction(sigma, Some(&corr));
        let (Some(ap), Some(ad)) = (max_step(&x, &step.dx), max_step(&s, &step.ds)) else {
            status = SolverStatus::NumericalFailure;
            break;
        };
        let ap = (STEP_FRACTION * ap).min(1.0);
        let ad = (STEP_FRACTION * ad).min(1.0);
        for k in 0..x.len() {
            x[k].add_scaled(ap, &step.dx[k]);
            x[k].symmetrize();
            s[k].add_scaled(ad, &step.ds[k]);
            s[k].symmetrize();
        }
        for (yi, d) in y.iter_mut().zip(&step.dy) {
            *yi += ad * d;
        }
    }

    let last = history.last().expect("at least one iteration recorded").clone();
    let mut y_full = vec![0.0; problem.constraints.len()];
    for (k, &i) in rp.kept.iter().enumerate() {
        y_full[i] = y[k];
    }
    let x_out = (0..x.len())
        .map(|k| extract(&x[k], problem.block_dims[k], rp.complex[k], true))
        .collect();
    let s_out = (0..s.len())
        .map(|k| extract(&s[k], problem.block_dims[k], rp.complex[k], false))
        .collect();
    Ok(SdpSolution {
        x: x_out,
        y: y_full,
        s: s_out,
        primal_objective: last.primal_objective,
        dual_objective: last.dual_objective,
        duality_gap: last.primal_objective - last.dual_objective,
        primal_infeasibility: last.primal_infeasibility,
        dual_infeasibility: last.dual_infeasibility,
        iterations,
        status,
        dropped_constraints: problem.constraints.len() - rp.kept.len(),
        history,
    })
}
