use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::newton::{damped_newton, sup_norm, SolverConfig};
use super::radial::closed_form_w;
use crate::error::{Error, Result};
use crate::linalg::conjugate_gradient;

/// `[s_min, s_max] × S¹`: `n_s` nodes uniform in `s` (ends are Dirichlet)
/// and `n_angle` periodic nodes at cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub n_s: usize,
    pub n_angle: usize,
}

impl AnnulusGrid {
    pub fn new(s_min: f64, s_max: f64, n_s: usize, n_angle: usize) -> Result<Self> {
        if !(s_min > 0.0 && s_max > s_min && s_max.is_finite()) {
            return Err(Error::Domain(format!("s interval [{s_min}, {s_max}] must lie in (0, inf)")));
        }
        if n_s < 3 || n_angle < 3 {
            return Err(Error::GridTooCoarse(format!("{n_s}x{n_angle} annulus, need at least 3x3")));
        }
        Ok(Self { s_min, s_max, n_s, n_angle })
    }

    pub fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n_s - 1) as f64
    }

    pub fn dangle(&self) -> f64 {
        2.0 * PI / self.n_angle as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        self.s_min + i as f64 * self.ds()
    }

    pub fn angle(&self, j: usize) -> f64 {
        -PI + (j as f64 + 0.5) * self.dangle()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSolution {
    pub theta: f64,
    pub grid: AnnulusGrid,
    /// Row-major in `(s, angle)`.
    pub w: Vec<f64>,
    /// Discrete residual at the interior rows, row-major.
    pub residual: Vec<f64>,
    pub iterations: usize,
    pub history: Vec<f64>,
    /// `max |w - w*|` against the rotationally symmetric closed form.
    pub sup_error: f64,
    /// Largest non-constant angular Fourier amplitude over all rows.
    pub angular_content: f64,
}

/// Largest `|ŵ_k|`, `k ≠ 0`, of the normalised angular DFT of each row.
pub fn angular_fourier_content(w: &[f64], n_s: usize, n_angle: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n_s {
        let row = &w[i * n_angle..(i + 1) * n_angle];
        for k in 1..=n_angle / 2 {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, x) in row.iter().enumerate() {
                let phase = 2.0 * PI * (k * j) as f64 / n_angle as f64;
                re += x * phase.cos();
                im -= x * phase.sin();
            }
            worst = worst.max((re * re + im * im).sqrt() / n_angle as f64);
        }
    }
    worst
}

/// Closed-form Dirichlet data with a non-symmetric initial guess.
pub fn solve_annulus(theta: f64, grid: &AnnulusGrid, config: &SolverConfig) -> Result<AnnulusSolution> {
    let len = grid.s_max - grid.s_min;
    let guess = |s: f64, angle: f64| {
        let (a, b) = (closed_form_w(theta, grid.s_min), closed_form_w(theta, grid.s_max));
        let lin = a + (b - a) * (s - grid.s_min) / len;
        lin + 0.3 * (PI * (s - grid.s_min) / len).sin() * (1.0 + angle.cos() + 0.5 * (2.0 * angle).sin())
    };
    solve_annulus_with(theta, grid, |s, _| closed_form_w(theta, s), guess, config)
}

/// Newton on the 5-point discretisation of `w_ss + w_φφ + e^{-2w} = 0`
/// with Dirichlet data `boundary(s, φ)` at `s_min` and `s_max`. Linear steps
/// use conjugate gradients on the negated (positive-definite) Jacobian.
pub fn solve_annulus_with<B, G>(
    theta: f64,
    grid: &AnnulusGrid,
    boundary: B,
    guess: G,
    config: &SolverConfig,
) -> Result<AnnulusSolution>
where
    B: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, 1)")));
    }
    AnnulusGrid::new(grid.s_min, grid.s_max, grid.n_s, grid.n_angle)?;
    let (ns, na) = (grid.n_s, grid.n_angle);
    let inner_rows = ns - 2;
    let lo: Vec<f64> = (0..na).map(|j| boundary(grid.s_min, grid.angle(j))).collect();
    let hi: Vec<f64> = (0..na).map(|j| boundary(grid.s_max, grid.angle(j))).collect();
    if lo.iter().chain(&hi).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("boundary data not finite".into()));
    }
    let (hs2, ha2) = (grid.ds().powi(2), grid.dangle().powi(2));
    let at = |x: &[f64], i: isize, j: usize| -> f64 {
        if i < 0 {
            lo[j]
        } else if i as usize >= inner_rows {
            hi[j]
        } else {
            x[i as usize * na + j]
        }
    };
    let residual = |x: &[f64]| -> Vec<f64> {
        let mut r = Vec::with_capacity(x.len());
        for i in 0..inner_rows as isize {
            for j in 0..na {
                let c = at(x, i, j);
                let d_ss = (at(x, i - 1, j) - 2.0 * c + at(x, i + 1, j)) / hs2;
                let d_aa = (at(x, i, (j + na - 1) % na) - 2.0 * c + at(x, i, (j + 1) % na)) / ha2;
                r.push(d_ss + d_aa + (-2.0 * c).exp());
            }
        }
        r
    };
    let cg_max = 20 * inner_rows * na;
    let step = |x: &[f64], r: &[f64], iteration: usize| -> Result<Vec<f64>> {
        let mass: Vec<f64> = x.iter().map(|v| 2.0 * (-2.0 * v).exp()).collect();
        // -J v = -(D² v) + 2 e^{-2w} v, homogeneous Dirichlet rows.
        let apply = |v: &[f64], out: &mut [f64]| {
            for i in 0..inner_rows {
                for j in 0..na {
                    let k = i * na + j;
                    let up = if i + 1 < inner_rows { v[k + na] } else { 0.0 };
                    let down = if i > 0 { v[k - na] } else { 0.0 };
                    let left = v[i * na + (j + na - 1) % na];
                    let right = v[i * na + (j + 1) % na];
                    out[k] = -(up - 2.0 * v[k] + down) / hs2 - (left - 2.0 * v[k] + right) / ha2 + mass[k] * v[k];
                }
            }
        };
        // J d = -r  ⇔  (-J) d = r.
        let outcome = conjugate_gradient(apply, r, 1e-13, cg_max);
        if !outcome.converged && outcome.relative_residual > 1e-9 {
            return Err(Error::SingularJacobian(iteration));
        }
        Ok(outcome.solution)
    };
    let mut x = Vec::with_capacity(inner_rows * na);
    for i in 1..ns - 1 {
        for j in 0..na {
            x.push(guess(grid.s(i), grid.angle(j)));
        }
    }
    let outcome = damped_newton(&mut x, residual, step, config)?;
    let final_residual = residual(&x);
    let mut w = Vec::with_capacity(ns * na);
    w.extend_from_slice(&lo);
    w.extend_from_slice(&x);
    w.extend_from_slice(&hi);
    let errors: Vec<f64> = (0..ns * na).map(|k| w[k] - closed_form_w(theta, grid.s(k / na))).collect();
    Ok(AnnulusSolution {
        theta,
        grid: *grid,
        sup_error: sup_norm(&errors),
        angular_content: angular_fourier_content(&w, ns, na),
        w,
        residual: final_residual,
        iterations: outcome.iterations,
        history: outcome.history,
    })
}
