use serde::{Deserialize, Serialize};

use crate::convergence::observed_orders;
use crate::error::{Error, Result};
use crate::linalg::fit_slope;
use crate::special::{sinhc, SERIES_THRESHOLD};

fn check(theta: f64, r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, 1)")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("r = {r} outside (0, 1)")));
    }
    Ok(())
}

/// Conformal factor `4θ² r^{2θ-2} / (1 - r^{2θ})²` of the hyperbolic cone
/// metric of angle `2πθ`; the cusp factor `1 / (r² log² r)` at `θ = 0`.
pub fn cone_conformal_factor(theta: f64, r: f64) -> Result<f64> {
    check(theta, r)?;
    let l = r.ln();
    if (theta * l).abs() < SERIES_THRESHOLD {
        return Ok((r * sinhc(theta, l)).powi(-2));
    }
    let denom = (2.0 * theta * l).exp_m1();
    Ok(4.0 * theta * theta * ((2.0 * theta - 2.0) * l).exp() / (denom * denom))
}

/// The same factor written as `θ² / (r² sinh²(θ log r))`.
pub fn cone_conformal_factor_sinh(theta: f64, r: f64) -> Result<f64> {
    check(theta, r)?;
    Ok((r * sinhc(theta, r.ln())).powi(-2))
}

/// Least-squares slope of `log factor` against `log r` on log-spaced radii.
pub fn cone_factor_log_slope(theta: f64, r_min: f64, r_max: f64, samples: usize) -> Result<f64> {
    if samples < 2 || !(r_min > 0.0 && r_max > r_min) {
        return Err(Error::InvalidInput("need at least two radii in an increasing range".into()));
    }
    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    for k in 0..samples {
        let x = r_min.ln() + (r_max / r_min).ln() * k as f64 / (samples - 1) as f64;
        xs.push(x);
        ys.push(cone_conformal_factor(theta, x.exp())?.ln());
    }
    Ok(fit_slope(&xs, &ys))
}

/// Square `[x_min, x_max] × [y_min, y_max]` in the flat `z`-plane with `n`
/// nodes per side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub n: usize,
}

impl CartesianGrid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, n: usize) -> Result<Self> {
        if !(x_max > x_min && y_max > y_min) {
            return Err(Error::InvalidInput("empty rectangle".into()));
        }
        if n < 3 {
            return Err(Error::GridTooCoarse(format!("{n} nodes per side, need at least 3")));
        }
        Ok(Self { x_min, x_max, y_min, y_max, n })
    }

    /// `[0.2, 0.5]²`, away from the puncture and inside the unit disk.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new(0.2, 0.5, 0.2, 0.5, n)
    }

    pub fn hx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x_min + i as f64 * self.hx(), self.y_min + j as f64 * self.hy())
    }

    pub fn refined(&self) -> Self {
        Self { n: 2 * (self.n - 1) + 1, ..*self }
    }
}

/// Samples `ρ = e^{2λ}` of a conformal metric `ρ |dz|²`, row-major in `(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalFactor {
    pub grid: CartesianGrid,
    pub values: Vec<f64>,
}

impl ConformalFactor {
    pub fn from_fn<F: Fn(f64, f64) -> Result<f64>>(grid: &CartesianGrid, f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.n * grid.n);
        for i in 0..grid.n {
            for j in 0..grid.n {
                let (x, y) = grid.point(i, j);
                values.push(f(x, y)?);
            }
        }
        Ok(Self { grid: *grid, values })
    }

    /// Radial hyperbolic cone factor sampled at `r = |z|`.
    pub fn cone(theta: f64, grid: &CartesianGrid) -> Result<Self> {
        Self::from_fn(grid, |x, y| cone_conformal_factor(theta, x.hypot(y)))
    }
}

/// Gauss curvature `K = -Δ log ρ / (2ρ)` at interior nodes, row-major over
/// the `(n - 2)²` interior block.
pub fn gauss_curvature(factor: &ConformalFactor) -> Result<Vec<f64>> {
    let g = &factor.grid;
    let n = g.n;
    if factor.values.len() != n * n {
        return Err(Error::InvalidInput("factor samples do not match the grid".into()));
    }
    if let Some(k) = factor.values.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!("conformal factor not positive at node {k}")));
    }
    let logs: Vec<f64> = factor.values.iter().map(|v| v.ln()).collect();
    let (hx2, hy2) = (g.hx().powi(2), g.hy().powi(2));
    let mut out = Vec::with_capacity((n - 2) * (n - 2));
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let c = logs[i * n + j];
            let lap = (logs[(i - 1) * n + j] - 2.0 * c + logs[(i + 1) * n + j]) / hx2
                + (logs[i * n + j - 1] - 2.0 * c + logs[i * n + j + 1]) / hy2;
            out.push(-lap / (2.0 * factor.values[i * n + j]));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureStudy {
    pub theta: f64,
    pub nodes: Vec<usize>,
    /// `max |K + 1|` on the interior nodes of the coarsest grid.
    pub max_errors: Vec<f64>,
    pub orders: Vec<f64>,
}

/// `max |K + 1|` for the cone factor on nested refinements of `base`.
pub fn curvature_convergence(theta: f64, base: &CartesianGrid, levels: usize) -> Result<CurvatureStudy> {
    let mut grid = *base;
    let mut nodes = Vec::with_capacity(levels);
    let mut max_errors = Vec::with_capacity(levels);
    for level in 0..levels {
        let k = gauss_curvature(&ConformalFactor::cone(theta, &grid)?)?;
        let stride = 1 << level;
        let m = grid.n - 2;
        let mut worst = 0.0f64;
        for i in (stride - 1..m).step_by(stride) {
            for j in (stride - 1..m).step_by(stride) {
                worst = worst.max((k[i * m + j] + 1.0).abs());
            }
        }
        nodes.push(grid.n);
        max_errors.push(worst);
        grid = grid.refined();
    }
    let orders = observed_orders(&max_errors, 2.0);
    Ok(CurvatureStudy { theta, nodes, max_errors, orders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::orders_within;

    #[test]
    fn two_forms_agree() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let theta = 0.01 + 0.98 * next();
            let r = 1e-6 + (0.99 - 1e-6) * next();
            let a = cone_conformal_factor(theta, r).unwrap();
            let b = cone_conformal_factor_sinh(theta, r).unwrap();
            assert!(((a - b) / b).abs() < 1e-12, "theta {theta} r {r}: {a} {b}");
        }
        let r = 0.3f64;
        assert!((cone_conformal_factor(0.0, r).unwrap() - 1.0 / (r * r * r.ln().powi(2))).abs() < 1e-12);
    }

    #[test]
    fn small_radius_exponent() {
        for theta in [0.25, 0.5, 0.75] {
            let slope = cone_factor_log_slope(theta, 1e-14, 1e-12, 20).unwrap();
            assert!((slope - 2.0 * (theta - 1.0)).abs() < 1e-3, "{slope}");
        }
    }

    #[test]
    fn hyperbolic_curvature() {
        let base = CartesianGrid::standard(9).unwrap();
        for theta in [0.0, 0.25, 0.5, 0.75] {
            let study = curvature_convergence(theta, &base, 4).unwrap();
            assert!(orders_within(&study.orders, 1.8, 2.2), "{study:?}");
        }
    }

    #[test]
    fn flat_and_invalid_factors() {
        let grid = CartesianGrid::standard(9).unwrap();
        let flat = ConformalFactor::from_fn(&grid, |_, _| Ok(4.0)).unwrap();
        assert!(gauss_curvature(&flat).unwrap().iter().all(|k| k.abs() < 1e-12));
        let bad = ConformalFactor::from_fn(&grid, |x, _| Ok(x - 0.3)).unwrap();
        assert!(gauss_curvature(&bad).is_err());
        assert!(cone_conformal_factor(1.0, 0.5).is_err());
        assert!(cone_conformal_factor(0.5, 1.0).is_err());
    }
}
