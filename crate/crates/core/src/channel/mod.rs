//! Squeezed generalized amplitude damping (SGAD) dynamics on one and three
//! qubits.
//!
//! Basis convention: bit value 0 is the excited level, so the lowering
//! operator is `σ₋ = |1⟩⟨0|` and the thermal fixed point has excited
//! population `n/(2n+1)`. Three-qubit indices put qubit A in the most
//! significant bit, so index 0 is `|000⟩` and index 7 is `|111⟩`.

mod lindblad;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigenvalues, ComplexMatrix};
use crate::states::DensityMatrix;

pub use lindblad::{default_step, integrate_master, LindbladMode, LindbladSpec};

/// Radicands in `[-RADICAND_CLAMP, 0]` are treated as exact zeros.
pub const RADICAND_CLAMP: f64 = 1e-12;
/// Choi matrices with min eigenvalue at or above `-CP_TOL` count as CP.
pub const CP_TOL: f64 = 1e-8;
const TRACE_CHECK: f64 = 1e-8;

/// Channel parameters: damping rate Ω, thermal photon number n and
/// squeezing m, with `m² ≤ n(n+1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SgadParams {
    omega: f64,
    n: f64,
    m: f64,
}

impl SgadParams {
    pub fn new(omega: f64, n: f64, m: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput(format!("omega = {omega} must be positive and finite")));
        }
        if !(n >= 0.0) || !n.is_finite() {
            return Err(Error::InvalidInput(format!("n = {n} must be non-negative and finite")));
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidInput(format!("m = {m} must be non-negative and finite")));
        }
        // small relative slack so that m = √(n(n+1)) computed in floating point is accepted
        let bound = n * (n + 1.0);
        if m * m > bound * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::InvalidInput(format!(
                "m = {m} violates m² ≤ n(n+1) = {bound}"
            )));
        }
        Ok(Self { omega, n, m })
    }

    /// Ω = 1 convenience constructor; times are then given directly as Ωt.
    pub fn unit_rate(n: f64, m: f64) -> Result<Self> {
        Self::new(1.0, n, m)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Largest admissible squeezing for this n.
    pub fn max_m(n: f64) -> f64 {
        (n * (n + 1.0)).sqrt()
    }

    /// Thermal excited-state population `n/(2n+1)`.
    pub fn excited_population(&self) -> f64 {
        self.n / (2.0 * self.n + 1.0)
    }

    pub fn ground_population(&self) -> f64 {
        (self.n + 1.0) / (2.0 * self.n + 1.0)
    }
}

impl fmt::Display for SgadParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ω = {}, n = {}, m = {}", self.omega, self.n, self.m)
    }
}

/// Elapsed time, or the t → ∞ marker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelTime {
    Finite(f64),
    Asymptotic,
}

impl ChannelTime {
    pub fn new(t: f64) -> Result<Self> {
        if t == f64::INFINITY {
            Ok(ChannelTime::Asymptotic)
        } else if t >= 0.0 && t.is_finite() {
            Ok(ChannelTime::Finite(t))
        } else {
            Err(Error::InvalidInput(format!("time t = {t} must be ≥ 0")))
        }
    }

    /// Time given as the dimensionless product Ωt.
    pub fn from_omega_t(omega_t: f64, p: &SgadParams) -> Result<Self> {
        Self::new(omega_t / p.omega)
    }

    pub fn t(&self) -> f64 {
        match self {
            ChannelTime::Finite(t) => *t,
            ChannelTime::Asymptotic => f64::INFINITY,
        }
    }

    pub fn omega_t(&self, p: &SgadParams) -> f64 {
        self.t() * p.omega
    }

    pub fn omega_t_n(&self, p: &SgadParams) -> f64 {
        if p.n == 0.0 {
            0.0
        } else {
            self.omega_t(p) * p.n
        }
    }

    pub fn omega_t_m(&self, p: &SgadParams) -> f64 {
        if p.m == 0.0 {
            0.0
        } else {
            self.omega_t(p) * p.m
        }
    }
}

/// Probability μ that the three qubits see the collective channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryParam(f64);

impl MemoryParam {
    pub fn new(mu: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&mu) {
            Ok(Self(mu))
        } else {
            Err(Error::InvalidInput(format!("mu = {mu} is outside [0, 1]")))
        }
    }

    pub fn mu(&self) -> f64 {
        self.0
    }
}

/// `e^{-rate·Ωt}` with the conventions `0·∞ = 0` and `e^{-∞} = 0`.
fn decay(rate: f64, omega_t: f64) -> f64 {
    if rate == 0.0 {
        1.0
    } else {
        (-rate * omega_t).exp()
    }
}

/// Single-qubit SGAD map as real coefficients on the 2×2 matrix entries:
///
/// ```text
/// ρ00 → a ρ00 + c ρ11      ρ01 → g ρ01 + h ρ10
/// ρ11 → b ρ00 + d ρ11      ρ10 → g ρ10 + h ρ01
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub g: f64,
    pub h: f64,
}

impl SingleQubitMap {
    pub fn new(p: &SgadParams, t: ChannelTime) -> Self {
        let wt = t.omega_t(p);
        let (p0, p1) = (p.excited_population(), p.ground_population());
        let e2 = decay(2.0 * p.n + 1.0, wt);
        // E·cosh(mΩt) and E·sinh(mΩt) without overflow
        let slow = decay(p.n + 0.5 - p.m, wt);
        let fast = decay(p.n + 0.5 + p.m, wt);
        Self {
            a: p0 + p1 * e2,
            b: p1 * (1.0 - e2),
            c: p0 * (1.0 - e2),
            d: p1 + p0 * e2,
            g: 0.5 * (slow + fast),
            h: -0.5 * (slow - fast),
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(rho.dim(), 2, "single-qubit map needs a 2×2 input");
        self.apply_to_qubit(rho, 0, 1)
    }

    /// Applies the map to qubit `qubit` (0 = most significant) of a
    /// `num_qubits`-qubit operator.
    pub fn apply_to_qubit(&self, rho: &ComplexMatrix, qubit: usize, num_qubits: usize) -> ComplexMatrix {
        let dim = rho.dim();
        debug_assert_eq!(dim, 1 << num_qubits);
        let mask = 1usize << (num_qubits - 1 - qubit);
        let mut out = ComplexMatrix::zeros(dim);
        for r0 in (0..dim).filter(|r| r & mask == 0) {
            let r1 = r0 | mask;
            for c0 in (0..dim).filter(|c| c & mask == 0) {
                let c1 = c0 | mask;
                let (x00, x01, x10, x11) = (rho[(r0, c0)], rho[(r0, c1)], rho[(r1, c0)], rho[(r1, c1)]);
                out[(r0, c0)] = x00 * self.a + x11 * self.c;
                out[(r1, c1)] = x00 * self.b + x11 * self.d;
                out[(r0, c1)] = x01 * self.g + x10 * self.h;
                out[(r1, c0)] = x10 * self.g + x01 * self.h;
            }
        }
        out
    }

    /// The two 2×2 blocks of the Choi matrix, on `{|00⟩,|11⟩}` and `{|01⟩,|10⟩}`.
    fn choi_blocks(&self) -> [[f64; 3]; 2] {
        [[self.a, self.g, self.d], [self.b, self.h, self.c]]
    }
}

/// Eigenpairs of the real symmetric `[[x, y], [y, z]]`, larger first.
fn sym2_eigen(x: f64, y: f64, z: f64) -> [(f64, [f64; 2]); 2] {
    let mean = 0.5 * (x + z);
    let rad = (0.25 * (x - z) * (x - z) + y * y).sqrt();
    let theta = 0.5 * (2.0 * y).atan2(x - z);
    let (s, c) = theta.sin_cos();
    [(mean + rad, [c, s]), (mean - rad, [-s, c])]
}

fn clamp_radicand(name: &str, value: f64, offending: &mut Vec<(String, f64)>) -> f64 {
    if value >= 0.0 {
        value
    } else if value >= -RADICAND_CLAMP {
        0.0
    } else {
        offending.push((name.to_string(), value));
        0.0
    }
}

/// Kraus operators `[K₁, K₂, K₃, K₄]` of the single-qubit SGAD map.
///
/// `K₁` and `K₃` are diagonal (`K₃ = I` at t = 0), `K₂` and `K₄` are
/// antidiagonal. Each is `√λ` times a reshaped eigenvector of the Choi
/// matrix; the eigenvalues λ are the radicands checked for positivity.
pub fn kraus_single(p: &SgadParams, t: ChannelTime) -> Result<[ComplexMatrix; 4]> {
    let map = SingleQubitMap::new(p, t);
    let [diag, anti] = map.choi_blocks();
    let [(l3, v3), (l1, v1)] = sym2_eigen(diag[0], diag[1], diag[2]);
    let [(l2, v2), (l4, v4)] = sym2_eigen(anti[0], anti[1], anti[2]);

    let mut offending = Vec::new();
    let l1 = clamp_radicand("k1", l1, &mut offending);
    let l2 = clamp_radicand("k2", l2, &mut offending);
    let l3 = clamp_radicand("k3", l3, &mut offending);
    let l4 = clamp_radicand("k4", l4, &mut offending);
    if !offending.is_empty() {
        return Err(Error::CpViolation {
            offending,
            n: p.n,
            m: p.m,
            omega_t: t.omega_t(p),
        });
    }

    let diagonal = |l: f64, v: [f64; 2]| {
        let s = l.sqrt();
        ComplexMatrix::from_real_diag(&[s * v[0], s * v[1]])
    };
    // Choi entry (i, a) ↦ Kraus entry K[a][i]; the block basis is {|01⟩, |10⟩}
    let antidiagonal = |l: f64, v: [f64; 2]| {
        let s = l.sqrt();
        let mut k = ComplexMatrix::zeros(2);
        k[(1, 0)] = Complex64::new(s * v[0], 0.0);
        k[(0, 1)] = Complex64::new(s * v[1], 0.0);
        k
    };
    Ok([diagonal(l1, v1), antidiagonal(l2, v2), diagonal(l3, v3), antidiagonal(l4, v4)])
}

/// `‖Σ Kᵢ†Kᵢ − I‖_max`.
pub fn kraus_completeness_residual(kraus: &[ComplexMatrix]) -> f64 {
    let dim = kraus[0].dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for k in kraus {
        sum = &sum + &(&k.adjoint() * k);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(dim))
}

fn require_three_qubits(rho: &ComplexMatrix) -> Result<()> {
    if rho.dim() != 8 {
        return Err(Error::InvalidInput(format!(
            "three-qubit channel needs an 8×8 state, got {}×{}",
            rho.dim(),
            rho.dim()
        )));
    }
    Ok(())
}

/// Φu as a linear map on arbitrary 8×8 operators.
pub fn uncorrelated_map(rho: &ComplexMatrix, p: &SgadParams, t: ChannelTime) -> Result<ComplexMatrix> {
    require_three_qubits(rho)?;
    // surface any radicand problem exactly as the Kraus route would
    kraus_single(p, t)?;
    let map = SingleQubitMap::new(p, t);
    let mut out = rho.clone();
    for q in 0..3 {
        out = map.apply_to_qubit(&out, q, 3);
    }
    Ok(out)
}

/// Φc (collective σ±^{⊗3} dynamics) as a linear map on 8×8 operators.
pub fn correlated_map(rho: &ComplexMatrix, p: &SgadParams, t: ChannelTime) -> Result<ComplexMatrix> {
    require_three_qubits(rho)?;
    let wt = t.omega_t(p);
    let n = p.n;
    let upper = decay(0.5 * (n + 1.0), wt);
    let lower = decay(0.5 * n, wt);
    let fast = decay(n + p.m + 0.5, wt);
    let slow = decay(n - p.m + 0.5, wt);
    let e = decay(2.0 * n + 1.0, wt);

    let mut out = rho.clone();
    for s in 1..7 {
        out[(0, s)] = rho[(0, s)] * upper;
        out[(s, 0)] = rho[(s, 0)] * upper;
        out[(s, 7)] = rho[(s, 7)] * lower;
        out[(7, s)] = rho[(7, s)] * lower;
    }
    let (r18, r81) = (rho[(0, 7)], rho[(7, 0)]);
    out[(0, 7)] = ((r18 + r81) * fast + (r18 - r81) * slow) * 0.5;
    out[(7, 0)] = ((r81 + r18) * fast + (r81 - r18) * slow) * 0.5;
    let (r11, r88) = (rho[(0, 0)], rho[(7, 7)]);
    let z = 2.0 * n + 1.0;
    out[(0, 0)] = ((r11 + r88) * n + (r11 + (r11 - r88) * n) * e) / z;
    out[(7, 7)] = (r11 * ((1.0 - e) * (1.0 + n)) + r88 * (1.0 + n * (1.0 + e))) / z;
    Ok(out)
}

/// `μ·Φc + (1−μ)·Φu` as a linear map on 8×8 operators.
pub fn memory_map(rho: &ComplexMatrix, p: &SgadParams, t: ChannelTime, mem: MemoryParam) -> Result<ComplexMatrix> {
    let mu = mem.mu();
    if mu == 1.0 {
        return correlated_map(rho, p, t);
    }
    if mu == 0.0 {
        return uncorrelated_map(rho, p, t);
    }
    let c = correlated_map(rho, p, t)?;
    let u = uncorrelated_map(rho, p, t)?;
    Ok(&c.scale(mu) + &u.scale(1.0 - mu))
}

fn finish(out: ComplexMatrix, what: &str) -> Result<DensityMatrix> {
    let tr = out.trace();
    if (tr.re - 1.0).abs() > TRACE_CHECK || tr.im.abs() > TRACE_CHECK {
        return Err(Error::Internal(format!("{what} produced trace {tr}")));
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}

pub fn apply_uncorrelated(rho: &DensityMatrix, p: &SgadParams, t: ChannelTime) -> Result<DensityMatrix> {
    finish(uncorrelated_map(rho.matrix(), p, t)?, "uncorrelated map")
}

pub fn apply_correlated(rho: &DensityMatrix, p: &SgadParams, t: ChannelTime) -> Result<DensityMatrix> {
    finish(correlated_map(rho.matrix(), p, t)?, "correlated map")
}

pub fn apply_memory(rho: &DensityMatrix, p: &SgadParams, t: ChannelTime, mem: MemoryParam) -> Result<DensityMatrix> {
    finish(memory_map(rho.matrix(), p, t, mem)?, "memory map")
}

/// Product of single-qubit thermal states, scaled by `weight`.
fn thermal_product(p: &SgadParams, weight: f64) -> ComplexMatrix {
    let (p0, p1) = (p.excited_population(), p.ground_population());
    let diag: Vec<f64> = (0..8usize)
        .map(|i| {
            let ground = i.count_ones() as i32;
            weight * p0.powi(3 - ground) * p1.powi(ground)
        })
        .collect();
    ComplexMatrix::from_real_diag(&diag)
}

/// t → ∞ limit of `μ·Φc + (1−μ)·Φu`, in closed form.
///
/// The uncorrelated part relaxes every input to the thermal product state.
/// The correlated part keeps the inner 6×6 block, clears the border rows and
/// columns (the `|111⟩` ones survive when n = 0) and the `|000⟩⟨111|`
/// coherence, and redistributes the
/// `{|000⟩, |111⟩}` population thermally. Neither part depends on m.
pub fn asymptotic_state(rho: &DensityMatrix, p: &SgadParams, mem: MemoryParam) -> Result<DensityMatrix> {
    let r = rho.matrix();
    require_three_qubits(r)?;
    let mu = mem.mu();
    let n = p.n;

    let mut corr = ComplexMatrix::zeros(8);
    for i in 1..7 {
        for j in 1..7 {
            corr[(i, j)] = r[(i, j)];
        }
        // at zero temperature nothing drives |111⟩ coherences to zero
        if n == 0.0 {
            corr[(i, 7)] = r[(i, 7)];
            corr[(7, i)] = r[(7, i)];
        }
    }
    let s = r[(0, 0)].re + r[(7, 7)].re;
    corr[(0, 0)] = Complex64::new(n * s / (2.0 * n + 1.0), 0.0);
    corr[(7, 7)] = Complex64::new((n + 1.0) * s / (2.0 * n + 1.0), 0.0);

    let out = &corr.scale(mu) + &thermal_product(p, 1.0 - mu);
    finish(out, "asymptotic map")
}

/// Which map a Choi matrix is built for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChoiMode {
    UncorrelatedSingle,
    Correlated,
    Memory(MemoryParam),
}

#[derive(Clone, Debug)]
pub struct ChoiReport {
    pub matrix: ComplexMatrix,
    pub min_eigenvalue: f64,
}

impl ChoiReport {
    pub fn is_cp(&self) -> bool {
        self.min_eigenvalue >= -CP_TOL
    }
}

/// `Σᵢⱼ |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` together with its smallest eigenvalue.
///
/// This is the unnormalized Choi matrix; the identity channel gives `d·|Φ⁺⟩⟨Φ⁺|`.
pub fn choi_matrix(p: &SgadParams, t: ChannelTime, mode: ChoiMode) -> Result<ChoiReport> {
    let d = match mode {
        ChoiMode::UncorrelatedSingle => 2,
        _ => 8,
    };
    let single = SingleQubitMap::new(p, t);
    let mut choi = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut unit = ComplexMatrix::zeros(d);
            unit[(i, j)] = Complex64::new(1.0, 0.0);
            let image = match mode {
                ChoiMode::UncorrelatedSingle => single.apply(&unit),
                ChoiMode::Correlated => correlated_map(&unit, p, t)?,
                ChoiMode::Memory(mem) => memory_map(&unit, p, t, mem)?,
            };
            for a in 0..d {
                for b in 0..d {
                    choi[(i * d + a, j * d + b)] = image[(a, b)];
                }
            }
        }
    }
    let min_eigenvalue = hermitian_eigenvalues(&choi)?[0];
    Ok(ChoiReport { matrix: choi, min_eigenvalue })
}
