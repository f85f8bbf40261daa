//! Small dense and banded linear algebra shared by the modules.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Mat2 = Matrix2<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Frobenius norm of the difference of two 2×2 complex matrices.
pub fn frobenius_distance(a: &Mat2, b: &Mat2) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// 2×2 Hermitian matrix `[[a, b], [conj(b), d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hermitian2 {
    pub a: f64,
    pub b: Complex64,
    pub d: f64,
}

impl Hermitian2 {
    pub fn new(a: f64, b: Complex64, d: f64) -> Self {
        Self { a, b, d }
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self { a, b: Complex64::new(0.0, 0.0), d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b.norm_sqr()
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.d.is_finite() && self.b.re.is_finite() && self.b.im.is_finite()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0.0 && self.det() > 0.0
    }

    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(c(self.a, 0.0), self.b, self.b.conj(), c(self.d, 0.0))
    }

    /// Hermitian part of a general matrix, `(m + m*) / 2`.
    pub fn from_matrix(m: &Mat2) -> Self {
        Self { a: m[(0, 0)].re, b: (m[(0, 1)] + m[(1, 0)].conj()) * 0.5, d: m[(1, 1)].re }
    }

    /// Congruence `g* h g`.
    pub fn congruence(&self, g: &Mat2) -> Self {
        Self::from_matrix(&(g.adjoint() * self.to_matrix() * g))
    }

    /// Eigenvalues of `self^{-1} other`, both assumed positive definite.
    ///
    /// They are the roots of `det(other - λ self) = 0`; returned in
    /// decreasing order.
    pub fn relative_eigenvalues(&self, other: &Hermitian2) -> (f64, f64) {
        let det_h = self.det();
        let det_k = other.det();
        let mixed = other.a * self.d + self.a * other.d - 2.0 * (other.b * self.b.conj()).re;
        let disc = (mixed * mixed - 4.0 * det_h * det_k).max(0.0);
        let q = 0.5 * (mixed + disc.sqrt());
        (q / det_h, det_k / q)
    }
}

/// Geodesic distance in the symmetric space of positive Hermitian 2×2
/// matrices: `sqrt(Σ log² λᵢ)` with `λᵢ` the eigenvalues of `h^{-1}k`.
pub fn symmetric_space_distance(h: &Hermitian2, k: &Hermitian2) -> f64 {
    let (l1, l2) = h.relative_eigenvalues(k);
    (l1.ln().powi(2) + l2.ln().powi(2)).sqrt()
}

/// Thomas algorithm for a tridiagonal system. `lower[i]` couples row `i`
/// to `i - 1` (`lower[0]` unused), `upper[i]` couples row `i` to `i + 1`.
/// Returns `None` on a vanishing pivot.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return None;
    }
    c_prime[0] = upper[0] / pivot;
    d_prime[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c_prime[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        c_prime[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d_prime[i] = (rhs[i] - lower[i] * d_prime[i - 1]) / pivot;
    }
    let mut x = d_prime;
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Some(x)
}

/// Outcome of a conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
}

/// Unpreconditioned conjugate gradients for a symmetric positive-definite
/// operator given as a matrix-free product `apply(x, out)`.
pub fn conjugate_gradient<F>(apply: F, rhs: &[f64], tol: f64, max_iter: usize) -> CgOutcome
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = rhs.len();
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let b_norm = dot(rhs, rhs).sqrt();
    if b_norm == 0.0 {
        return CgOutcome { solution: x, iterations: 0, relative_residual: 0.0, converged: true };
    }
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    while iterations < max_iter {
        if rr.sqrt() <= tol * b_norm {
            break;
        }
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        iterations += 1;
    }
    let relative_residual = rr.sqrt() / b_norm;
    CgOutcome { solution: x, iterations, relative_residual, converged: relative_residual <= tol }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_matches_dense_solution() {
        let lower = [0.0, 1.0, 1.0, 1.0];
        let diag = [-4.0, -4.0, -4.0, -4.0];
        let upper = [1.0, 1.0, 1.0, 0.0];
        let x_true = [1.0, -2.0, 0.5, 3.0];
        let rhs: Vec<f64> = (0..4)
            .map(|i| {
                let mut v = diag[i] * x_true[i];
                if i > 0 {
                    v += lower[i] * x_true[i - 1];
                }
                if i < 3 {
                    v += upper[i] * x_true[i + 1];
                }
                v
            })
            .collect();
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs).unwrap();
        for (a, b) in x.iter().zip(x_true) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn distance_of_diagonal_pair() {
        let h = Hermitian2::diag(2.0, 0.5);
        let k = Hermitian2::diag(1.0, 1.0);
        let d = symmetric_space_distance(&h, &k);
        assert!((d - (2.0f64.ln().powi(2) * 2.0).sqrt()).abs() < 1e-14);
        assert_eq!(symmetric_space_distance(&h, &h), 0.0);
    }

    #[test]
    fn cg_solves_spd_system() {
        // 1D Dirichlet Laplacian plus mass term.
        let n = 50;
        let apply = |x: &[f64], out: &mut [f64]| {
            for i in 0..n {
                let left = if i > 0 { x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                out[i] = 2.5 * x[i] - left - right;
            }
        };
        let b = vec![1.0; n];
        let out = conjugate_gradient(apply, &b, 1e-13, 500);
        assert!(out.converged);
        let mut check = vec![0.0; n];
        apply(&out.solution, &mut check);
        for (a, b) in check.iter().zip(&b) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
