//! Fixed-step RK4 integration of the SGAD master equation, used as an
//! independent oracle for the closed-form maps.

use num_complex::Complex64;

use super::{ChannelTime, SgadParams};
use crate::error::{Error, Result};
use crate::matcore::{pauli, tensor, ComplexMatrix};
use crate::states::DensityMatrix;

const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LindbladMode {
    /// Sum of three independent single-qubit generators.
    Uncorrelated,
    /// One generator built from the collective σ±^{⊗3}.
    Correlated,
}

/// Jump operators and rates of the master equation
///
/// ```text
/// dρ/dt = Σⱼₖ cⱼₖ (Lⱼ ρ Lₖ† − ½{Lₖ†Lⱼ, ρ}),   L₁ = σ₋, L₂ = σ₊,
/// c = Ω [[n+1, −m], [−m, n]]
/// ```
///
/// where the off-diagonal entries produce the squeezing terms
/// `−Ωm (σ₋ρσ₋ + σ₊ρσ₊)`.
#[derive(Clone, Debug)]
pub struct LindbladSpec {
    pub params: SgadParams,
    pub mode: LindbladMode,
    pub lowering: ComplexMatrix,
    pub raising: ComplexMatrix,
}

impl LindbladSpec {
    pub fn new(params: SgadParams, mode: LindbladMode) -> Self {
        let (lowering, raising) = match mode {
            LindbladMode::Uncorrelated => (pauli::lowering(), pauli::raising()),
            LindbladMode::Correlated => {
                let l = pauli::lowering();
                let r = pauli::raising();
                (tensor(&tensor(&l, &l), &l), tensor(&tensor(&r, &r), &r))
            }
        };
        debug_assert_eq!(raising, lowering.adjoint());
        Self { params, mode, lowering, raising }
    }

    /// Pairs of (lowering, raising) operators acting on the 8-dim space.
    fn channels(&self) -> Vec<(ComplexMatrix, ComplexMatrix)> {
        match self.mode {
            LindbladMode::Correlated => vec![(self.lowering.clone(), self.raising.clone())],
            LindbladMode::Uncorrelated => (0..3)
                .map(|q| (embed(&self.lowering, q), embed(&self.raising, q)))
                .collect(),
        }
    }

    /// Dense generator applied to one operator.
    pub fn generator(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let p = &self.params;
        let rates = [
            [p.omega() * (p.n() + 1.0), -p.omega() * p.m()],
            [-p.omega() * p.m(), p.omega() * p.n()],
        ];
        let mut out = ComplexMatrix::zeros(rho.dim());
        for (lower, raise) in self.channels() {
            let ops = [lower, raise];
            for j in 0..2 {
                for k in 0..2 {
                    let rate = rates[j][k];
                    if rate == 0.0 {
                        continue;
                    }
                    let lk_dag = ops[k].adjoint();
                    let sandwich = &(&ops[j] * rho) * &lk_dag;
                    let kj = &lk_dag * &ops[j];
                    let anti = &(&kj * rho) + &(rho * &kj);
                    out = &out + &(&sandwich - &anti.scale(0.5)).scale(rate);
                }
            }
        }
        out
    }

    /// Generator as a sparse 64×64 superoperator on row-major vec(ρ).
    fn liouvillian(&self) -> SparseOperator {
        let mut entries = Vec::new();
        for col in 0..64 {
            let mut unit = ComplexMatrix::zeros(8);
            unit[(col / 8, col % 8)] = Complex64::new(1.0, 0.0);
            let image = self.generator(&unit);
            for (row, v) in image.as_slice().iter().enumerate() {
                if v.norm() > 0.0 {
                    entries.push((row, col, *v));
                }
            }
        }
        SparseOperator { entries }
    }
}

fn embed(op: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let factors: Vec<&ComplexMatrix> = (0..3).map(|q| if q == qubit { op } else { &id }).collect();
    tensor(&tensor(factors[0], factors[1]), factors[2])
}

struct SparseOperator {
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOperator {
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for &(r, c, v) in &self.entries {
            out[r] += v * x[c];
        }
    }
}

/// Largest step accepted by [`integrate_master`]: `0.01/(Ω(2n+1))`.
pub fn default_step(p: &SgadParams) -> f64 {
    0.01 / (p.omega() * (2.0 * p.n() + 1.0))
}

/// Integrates the master equation from 0 to `t_final` with classical RK4.
///
/// The interval is split into `⌈t/dt⌉` equal steps, so the step actually
/// used never exceeds `dt`.
pub fn integrate_master(
    rho: &DensityMatrix,
    spec: &LindbladSpec,
    t_final: ChannelTime,
    dt: f64,
) -> Result<DensityMatrix> {
    if rho.dim() != 8 {
        return Err(Error::InvalidInput(format!("master equation needs an 8×8 state, got dim {}", rho.dim())));
    }
    let bound = default_step(&spec.params);
    if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "step dt = {dt} exceeds the stability bound 0.01/(Ω(2n+1)) = {bound}"
        )));
    }
    let t = match t_final {
        ChannelTime::Finite(t) => t,
        ChannelTime::Asymptotic => {
            return Err(Error::InvalidInput("cannot integrate to t = ∞".into()));
        }
    };
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let steps = (t / dt).ceil() as usize;
    let h = t / steps as f64;
    let op = spec.liouvillian();

    let mut x: Vec<Complex64> = rho.matrix().as_slice().to_vec();
    let mut k1 = vec![Complex64::new(0.0, 0.0); 64];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for _ in 0..steps {
        op.apply(&x, &mut k1);
        for i in 0..64 {
            tmp[i] = x[i] + k1[i] * (0.5 * h);
        }
        op.apply(&tmp, &mut k2);
        for i in 0..64 {
            tmp[i] = x[i] + k2[i] * (0.5 * h);
        }
        op.apply(&tmp, &mut k3);
        for i in 0..64 {
            tmp[i] = x[i] + k3[i] * h;
        }
        op.apply(&tmp, &mut k4);
        for i in 0..64 {
            x[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }

    let out = ComplexMatrix::from_vec(8, x)?;
    let drift = (out.trace() - Complex64::new(1.0, 0.0)).norm();
    if drift > TRACE_DRIFT_LIMIT {
        return Err(Error::IntegrationFailure(format!(
            "trace drifted by {drift:.3e} over {steps} steps"
        )));
    }
    let herm = out.hermitian_deviation();
    if herm > TRACE_DRIFT_LIMIT {
        return Err(Error::IntegrationFailure(format!(
            "Hermiticity lost: max |ρ − ρ†| = {herm:.3e}"
        )));
    }
    Ok(DensityMatrix::from_trusted(out.hermitian_part()))
}
