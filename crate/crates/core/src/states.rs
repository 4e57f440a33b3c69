//! Three-qubit GHZ/W state families and validated density matrices.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigenvalues, ComplexMatrix, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

/// A single failed density-matrix invariant with its numeric size.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NotHermitian { max_deviation: f64 },
    Trace { trace: f64 },
    NotPositive { min_eigenvalue: f64 },
    Dimension { dim: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { max_deviation } => {
                write!(f, "not Hermitian (max |ρ − ρ†| = {max_deviation:.3e})")
            }
            Violation::Trace { trace } => write!(f, "trace is {trace} (deviation {:.3e})", trace - 1.0),
            Violation::NotPositive { min_eigenvalue } => {
                write!(f, "not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")
            }
            Violation::Dimension { dim } => write!(f, "dimension {dim} is not a power of two"),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.matrix[(r, c)]
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `|v⟩⟨v|/⟨v|v⟩`.
    pub fn from_ket(ket: &[Complex64]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("ket has zero norm".into()));
        }
        let m = ComplexMatrix::outer(ket).scale(1.0 / norm);
        Ok(Self { matrix: m })
    }

    /// `λ·a + (1 − λ)·b`.
    pub fn mix(lambda: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) || a.dim() != b.dim() {
            return Err(Error::InvalidInput(format!(
                "cannot mix with weight {lambda} (dims {} and {})",
                a.dim(),
                b.dim()
            )));
        }
        Ok(Self {
            matrix: &a.matrix.scale(lambda) + &b.matrix.scale(1.0 - lambda),
        })
    }

    /// Wraps a matrix produced by a trace-preserving, Hermiticity-preserving
    /// map of a valid state. Callers must guarantee validity.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }
}

/// Checks every density-matrix invariant, reporting all violations at once.
pub fn validate(rho: ComplexMatrix) -> Result<DensityMatrix> {
    let mut violations = Vec::new();
    if !rho.dim().is_power_of_two() {
        violations.push(Violation::Dimension { dim: rho.dim() });
    }
    let dev = rho.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        violations.push(Violation::NotHermitian { max_deviation: dev });
    }
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        violations.push(Violation::Trace { trace });
    }
    if dev <= HERMITIAN_TOL {
        let min = hermitian_eigenvalues(&rho)?[0];
        if min < -PSD_TOL {
            violations.push(Violation::NotPositive { min_eigenvalue: min });
        }
    }
    if violations.is_empty() {
        Ok(DensityMatrix { matrix: rho })
    } else {
        Err(Error::InvalidState(violations))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ghz1,
    Ghz2,
    Ghz3,
    Ghz4,
    W,
    Wtilde,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Ghz1,
        Family::Ghz2,
        Family::Ghz3,
        Family::Ghz4,
        Family::W,
        Family::Wtilde,
    ];

    pub fn is_ghz(self) -> bool {
        !matches!(self, Family::W | Family::Wtilde)
    }

    /// Basis indices carrying equal amplitude in the pure state.
    pub fn support(self) -> &'static [usize] {
        match self {
            Family::Ghz1 => &[0b000, 0b111],
            Family::Ghz2 => &[0b001, 0b110],
            Family::Ghz3 => &[0b010, 0b101],
            Family::Ghz4 => &[0b011, 0b100],
            Family::W => &[0b001, 0b010, 0b100],
            Family::Wtilde => &[0b011, 0b101, 0b110],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Ghz1 => "ghz1",
            Family::Ghz2 => "ghz2",
            Family::Ghz3 => "ghz3",
            Family::Ghz4 => "ghz4",
            Family::W => "w",
            Family::Wtilde => "wtilde",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown family '{s}' (expected one of ghz1, ghz2, ghz3, ghz4, w, wtilde)"
                ))
            })
    }
}

pub fn make_pure(family: Family) -> DensityMatrix {
    let support = family.support();
    let amp = 1.0 / support.len() as f64;
    let mut m = ComplexMatrix::zeros(8);
    for &r in support {
        for &c in support {
            m[(r, c)] = Complex64::new(amp, 0.0);
        }
    }
    DensityMatrix { matrix: m }
}

/// A named pure state mixed with white noise.
///
/// GHZ families are parameterized by visibility `α`
/// (`α|GHZ⟩⟨GHZ| + (1−α)I/8`), W families by noise weight `β`
/// (`(1−β)|W⟩⟨W| + βI/8`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisyFamilySpec {
    family: Family,
    param: f64,
}

impl NoisyFamilySpec {
    /// `param` is α for GHZ families and β for W families.
    pub fn new(family: Family, param: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&param) {
            let name = if family.is_ghz() { "alpha" } else { "beta" };
            return Err(Error::InvalidInput(format!(
                "{name} = {param} is outside [0, 1]"
            )));
        }
        Ok(Self { family, param })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// α for GHZ families, β for W families.
    pub fn param(&self) -> f64 {
        self.param
    }

    pub fn param_name(&self) -> &'static str {
        if self.family.is_ghz() {
            "alpha"
        } else {
            "beta"
        }
    }

    /// Weight of the pure state in the mixture.
    pub fn pure_weight(&self) -> f64 {
        if self.family.is_ghz() {
            self.param
        } else {
            1.0 - self.param
        }
    }
}

pub fn make_noisy(spec: &NoisyFamilySpec) -> DensityMatrix {
    let w = spec.pure_weight();
    let pure = make_pure(spec.family);
    let noise = ComplexMatrix::identity(8).scale((1.0 - w) / 8.0);
    DensityMatrix {
        matrix: &pure.matrix.scale(w) + &noise,
    }
}

/// Random mixed state `G G† / tr(G G†)` with standard normal complex `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix {
        matrix: gg.scale(1.0 / tr).hermitian_part(),
    }
}

/// Haar-ish random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = (&g + &g.adjoint()).scale(0.5);
    crate::matcore::hermitian_eigen(&h)
        .expect("symmetrized matrix is Hermitian")
        .vectors
}

/// On-disk state description: either an explicit matrix or a named family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Matrix {
        dim: usize,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
    Ghz {
        family: Family,
        alpha: f64,
    },
    W {
        family: Family,
        beta: f64,
    },
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        StateFile::Matrix {
            dim: m.dim(),
            re: m.real_parts(),
            im: m.imag_parts(),
        }
    }

    pub fn from_spec(spec: &NoisyFamilySpec) -> Self {
        if spec.family.is_ghz() {
            StateFile::Ghz {
                family: spec.family,
                alpha: spec.param,
            }
        } else {
            StateFile::W {
                family: spec.family,
                beta: spec.param,
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::InvalidInput(format!(
                "state file line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }

    /// Raw matrix described by the file, without density-matrix validation.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        match self {
            StateFile::Matrix { dim, re, im } => {
                let m = ComplexMatrix::from_parts(re, im)?;
                if m.dim() != *dim {
                    return Err(Error::InvalidInput(format!(
                        "field \"dim\" is {dim} but the matrix has {} rows",
                        m.dim()
                    )));
                }
                Ok(m)
            }
            _ => Ok(make_noisy(&self.family_spec()?.expect("family variant")).into_matrix()),
        }
    }

    pub fn family_spec(&self) -> Result<Option<NoisyFamilySpec>> {
        match *self {
            StateFile::Matrix { .. } => Ok(None),
            StateFile::Ghz { family, alpha } => {
                if !family.is_ghz() {
                    return Err(Error::InvalidInput(format!(
                        "field \"alpha\" given for {family}; W families take \"beta\""
                    )));
                }
                NoisyFamilySpec::new(family, alpha).map(Some)
            }
            StateFile::W { family, beta } => {
                if family.is_ghz() {
                    return Err(Error::InvalidInput(format!(
                        "field \"beta\" given for {family}; GHZ families take \"alpha\""
                    )));
                }
                NoisyFamilySpec::new(family, beta).map(Some)
            }
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        validate(self.to_matrix()?)
    }
}
