//! Real dense square matrices for the interior-point iteration.

use std::ops::{Index, IndexMut};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, |r, c| self[(c, r)])
    }

    /// `self += s·other`.
    pub fn add_scaled(&mut self, s: f64, other: &Mat) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn scaled(&self, s: f64) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn dot(&self, other: &Mat) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    #[cfg(test)]
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn symmetrize(&mut self) {
        let n = self.n;
        for r in 0..n {
            for c in (r + 1)..n {
                let v = 0.5 * (self[(r, c)] + self[(c, r)]);
                self[(r, c)] = v;
                self[(c, r)] = v;
            }
        }
    }

    /// Lower-triangular `L` with `L Lᵀ = self`, or `None` if not positive definite.
    pub fn cholesky(&self) -> Option<Mat> {
        let n = self.n;
        let mut l = Mat::zeros(n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in (j + 1)..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Some(l)
    }

    /// Inverse of a lower-triangular matrix.
    pub fn lower_inverse(&self) -> Mat {
        let n = self.n;
        let mut inv = Mat::zeros(n);
        for j in 0..n {
            inv[(j, j)] = 1.0 / self[(j, j)];
            for i in (j + 1)..n {
                let mut s = 0.0;
                for k in j..i {
                    s += self[(i, k)] * inv[(k, j)];
                }
                inv[(i, j)] = -s / self[(i, i)];
            }
        }
        inv
    }

    /// Inverse of a symmetric positive definite matrix.
    pub fn spd_inverse(&self) -> Option<Mat> {
        let li = self.cholesky()?.lower_inverse();
        let mut inv = li.transpose().matmul(&li);
        inv.symmetrize();
        Some(inv)
    }

    /// Eigenvalues of a symmetric matrix, ascending (cyclic Jacobi).
    pub fn sym_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = self.clone();
        a.symmetrize();
        let threshold = 1e-14 * a.frobenius_norm().max(f64::MIN_POSITIVE);
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
                .map(|(r, c)| a[(r, c)] * a[(r, c)])
                .sum::<f64>()
                .sqrt();
            if off <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                }
            }
        }
        let mut vals: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
        vals.sort_by(f64::total_cmp);
        vals
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.n + c]
    }
}

/// Solves `L Lᵀ x = b` given the Cholesky factor `L`.
pub fn cholesky_solve(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.n();
    let mut z = b.to_vec();
    for i in 0..n {
        let mut s = z[i];
        for k in 0..i {
            s -= l[(i, k)] * z[k];
        }
        z[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * z[k];
        }
        z[i] = s / l[(i, i)];
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd() -> Mat {
        let g = Mat::from_fn(4, |r, c| ((r * 7 + c * 3) % 5) as f64 - 1.5);
        let mut m = g.matmul(&g.transpose());
        m.add_scaled(0.5, &Mat::identity(4));
        m
    }

    #[test]
    fn cholesky_round_trip_and_solve() {
        let m = spd();
        let l = m.cholesky().unwrap();
        let back = l.matmul(&l.transpose());
        assert!(back.data.iter().zip(&m.data).all(|(a, b)| (a - b).abs() < 1e-12));
        let b = [1.0, -2.0, 0.5, 3.0];
        let x = cholesky_solve(&l, &b);
        for r in 0..4 {
            let ax: f64 = (0..4).map(|c| m[(r, c)] * x[c]).sum();
            assert!((ax - b[r]).abs() < 1e-12);
        }
        let inv = m.spd_inverse().unwrap();
        let id = inv.matmul(&m);
        assert!(id.data.iter().zip(&Mat::identity(4).data).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut m = Mat::identity(2);
        m[(1, 1)] = -1.0;
        assert!(m.cholesky().is_none());
    }

    #[test]
    fn jacobi_eigenvalues_match_trace_and_known_spectrum() {
        let m = Mat::from_fn(3, |r, c| if r == c { 2.0 } else if (r as i32 - c as i32).abs() == 1 { -1.0 } else { 0.0 });
        let v = m.sym_eigenvalues();
        let expected = [2.0 - 2f64.sqrt(), 2.0, 2.0 + 2f64.sqrt()];
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13);
        }
        let s = spd();
        let sum: f64 = s.sym_eigenvalues().iter().sum();
        assert!((sum - s.trace()).abs() < 1e-12);
    }
}
