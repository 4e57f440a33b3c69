#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sgad_core::matcore::{tensor, ComplexMatrix};
use sgad_core::states::{random_density, random_unitary, validate, DensityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + &g.adjoint()).scale(0.5)
}

/// Random positive weights summing to one.
pub fn simplex<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().max(1e-12).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// X-state with random populations and coherences inside the PSD region.
pub fn random_xstate<R: Rng>(rng: &mut R) -> DensityMatrix {
    let p = simplex(8, rng);
    let mut m = ComplexMatrix::from_real_diag(&p);
    for i in 0..4 {
        let bound = (p[i] * p[7 - i]).sqrt();
        let r = bound * rng.random::<f64>().sqrt();
        let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let z = Complex64::from_polar(r, phase);
        m[(i, 7 - i)] = z;
        m[(7 - i, i)] = z.conj();
    }
    validate(m).expect("X-state inside the PSD region")
}

/// Mixture of the eight GHZ-basis states `(|i⟩ ± |7−i⟩)/√2`; one weight is
/// boosted by `bias` so both entangled and biseparable samples occur.
pub fn random_ghz_diagonal<R: Rng>(rng: &mut R, bias: f64) -> DensityMatrix {
    let mut w = simplex(8, rng);
    let k = rng.random_range(0..8);
    w[k] += bias;
    let s: f64 = w.iter().sum();
    let w: Vec<f64> = w.into_iter().map(|x| x / s).collect();
    let mut m = ComplexMatrix::zeros(8);
    for i in 0..4 {
        let (plus, minus) = (w[2 * i], w[2 * i + 1]);
        m[(i, i)] = c(0.5 * (plus + minus));
        m[(7 - i, 7 - i)] = c(0.5 * (plus + minus));
        m[(i, 7 - i)] = c(0.5 * (plus - minus));
        m[(7 - i, i)] = c(0.5 * (plus - minus));
    }
    validate(m).expect("GHZ-diagonal state")
}

/// Reorders qubits: output qubit `q` is input qubit `perm[q]` (0 = A).
pub fn permute_qubits(m: &ComplexMatrix, perm: [usize; 3]) -> ComplexMatrix {
    let map = |i: usize| {
        let bits = [(i >> 2) & 1, (i >> 1) & 1, i & 1];
        let mut out = 0;
        for q in 0..3 {
            // output bit q takes input bit perm[q]
            out |= bits[q] << (2 - perm[q]);
        }
        out
    };
    ComplexMatrix::from_fn(8, |r, col| m[(map(r), map(col))])
}

/// `Σ p_k ρ_X^k ⊗ ρ_YZ^k` with the single party placed at `party`.
pub fn random_biseparable<R: Rng>(rng: &mut R, terms: usize, party: usize) -> DensityMatrix {
    let p = simplex(terms, rng);
    let mut m = ComplexMatrix::zeros(8);
    for pk in p {
        let a = random_density(2, rng);
        let bc = random_density(4, rng);
        m = &m + &tensor(a.matrix(), bc.matrix()).scale(pk);
    }
    // party 0 needs no reordering; otherwise swap qubit A with `party`
    let perm = match party {
        0 => [0, 1, 2],
        1 => [1, 0, 2],
        _ => [2, 1, 0],
    };
    validate(permute_qubits(&m, perm)).expect("biseparable mixture is a state")
}

pub fn random_local_unitary<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let ua = random_unitary(2, rng);
    let ub = random_unitary(2, rng);
    let uc = random_unitary(2, rng);
    tensor(&tensor(&ua, &ub), &uc)
}

pub fn conjugate(rho: &DensityMatrix, u: &ComplexMatrix) -> DensityMatrix {
    let m = &(u * rho.matrix()) * &u.adjoint();
    validate(m.hermitian_part()).expect("unitary image is a state")
}

pub fn random_state(seed: u64) -> DensityMatrix {
    random_density(8, &mut rng(seed))
}
