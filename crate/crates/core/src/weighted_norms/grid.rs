use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat2;

/// `(s, t) = (-log r, log(-log r))`, defined on the cusp neighbourhood
/// `0 < r < 1/e` where `t > 0`.
pub fn cylinder_coords(r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r < 1.0 / E) {
        return Err(Error::Domain(format!("r = {r} outside (0, 1/e)")));
    }
    let s = -r.ln();
    Ok((s, s.ln()))
}

/// Tensor grid on the cylinder: `n_t` nodes uniform in `t = log s` and
/// `n_angle` periodic angular nodes at cell centres of `(-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub n_angle: usize,
    /// Weight exponent in `e^{δt}`.
    pub delta: f64,
    /// Integrability exponent.
    pub p: f64,
}

impl CylinderGrid {
    pub fn new(t_min: f64, t_max: f64, n_t: usize, n_angle: usize, delta: f64, p: f64) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_max > t_min) {
            return Err(Error::InvalidInput(format!("t range [{t_min}, {t_max}] empty")));
        }
        if n_t < 2 || n_angle < 1 {
            return Err(Error::GridTooCoarse(format!("{n_t}x{n_angle} cylinder grid")));
        }
        if !(delta > 0.0) || !(p > 1.0) {
            return Err(Error::InvalidInput(format!("need delta > 0 and p > 1, got {delta}, {p}")));
        }
        Ok(Self { t_min, t_max, n_t, n_angle, delta, p })
    }

    /// Grid over `s ∈ [s_min, s_max]`.
    pub fn from_s_range(s_min: f64, s_max: f64, n_t: usize, n_angle: usize, delta: f64, p: f64) -> Result<Self> {
        if !(s_min > 0.0) {
            return Err(Error::Domain(format!("s_min = {s_min} must be positive")));
        }
        Self::new(s_min.ln(), s_max.ln(), n_t, n_angle, delta, p)
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_t - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.dt()
    }

    pub fn s(&self, i: usize) -> f64 {
        self.t(i).exp()
    }

    pub fn angle(&self, j: usize) -> f64 {
        -PI + (j as f64 + 0.5) * 2.0 * PI / self.n_angle as f64
    }

    pub fn nodes(&self) -> usize {
        self.n_t * self.n_angle
    }

    /// Double `s_max` keeping the spacing in `t` (to within rounding of
    /// the node count).
    pub fn extended(&self) -> Self {
        let t_max = self.t_max + std::f64::consts::LN_2;
        let extra = (std::f64::consts::LN_2 / self.dt()).round().max(1.0) as usize;
        Self { t_max, n_t: self.n_t + extra, ..*self }
    }
}

/// Complex-valued samples with `components` values per node, node index
/// `i * n_angle + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSection {
    pub components: usize,
    /// 0 for sections, higher for the gradients built from them.
    pub form_degree: usize,
    values: Vec<Complex64>,
}

impl SampledSection {
    pub(crate) fn from_raw(components: usize, form_degree: usize, values: Vec<Complex64>) -> Self {
        Self { components, form_degree, values }
    }

    pub fn new(grid: &CylinderGrid, components: usize, form_degree: usize, values: Vec<Complex64>) -> Result<Self> {
        let s = Self { components, form_degree, values };
        s.check_shape(grid)?;
        Ok(s)
    }

    pub fn scalar<F: Fn(f64, f64) -> Complex64>(grid: &CylinderGrid, f: F) -> Self {
        let mut values = Vec::with_capacity(grid.nodes());
        for i in 0..grid.n_t {
            for j in 0..grid.n_angle {
                values.push(f(grid.t(i), grid.angle(j)));
            }
        }
        Self { components: 1, form_degree: 0, values }
    }

    /// 2×2 endomorphism-valued samples, stored row-major.
    pub fn matrix<F: Fn(f64, f64) -> Mat2>(grid: &CylinderGrid, f: F) -> Self {
        let mut values = Vec::with_capacity(4 * grid.nodes());
        for i in 0..grid.n_t {
            for j in 0..grid.n_angle {
                let m = f(grid.t(i), grid.angle(j));
                values.extend([m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]);
            }
        }
        Self { components: 4, form_degree: 0, values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub(crate) fn check_shape(&self, grid: &CylinderGrid) -> Result<()> {
        if self.components == 0 || self.values.len() != grid.nodes() * self.components {
            return Err(Error::InvalidInput(format!(
                "{} samples with {} components do not fit a {}x{} grid",
                self.values.len(),
                self.components,
                grid.n_t,
                grid.n_angle
            )));
        }
        Ok(())
    }

    pub(crate) fn get(&self, i: usize, j: usize, c: usize, grid: &CylinderGrid) -> Complex64 {
        self.values[(i * grid.n_angle + j) * self.components + c]
    }

    /// Euclidean norm of the component vector at node `(i, j)`.
    pub fn pointwise_norm(&self, i: usize, j: usize, grid: &CylinderGrid) -> f64 {
        let start = (i * grid.n_angle + j) * self.components;
        self.values[start..start + self.components].iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates() {
        let (s, t) = cylinder_coords((-E).exp()).unwrap();
        assert!((s - E).abs() < 1e-15 && (t - 1.0).abs() < 1e-15);
        assert!(cylinder_coords(1.0 / E).is_err());
        assert!(cylinder_coords(0.0).is_err());
        assert!(cylinder_coords(0.999 / E).is_ok());
        let (s1, _) = cylinder_coords(0.01).unwrap();
        let (s2, _) = cylinder_coords(0.1).unwrap();
        assert!(s1 > s2);
    }

    #[test]
    fn grid_validation_and_extension() {
        assert!(CylinderGrid::new(0.0, 1.0, 10, 4, 0.0, 2.0).is_err());
        assert!(CylinderGrid::new(0.0, 1.0, 10, 4, 0.25, 1.0).is_err());
        assert!(CylinderGrid::new(1.0, 1.0, 10, 4, 0.25, 2.0).is_err());
        assert!(CylinderGrid::from_s_range(0.0, 3.0, 10, 4, 0.25, 2.0).is_err());
        let g = CylinderGrid::from_s_range(1.0, 20.0, 200, 1, 0.25, 2.0).unwrap();
        let e = g.extended();
        assert!((e.s(e.n_t - 1) - 40.0).abs() < 1e-9);
        assert!((e.dt() - g.dt()).abs() / g.dt() < 0.01);
    }
}
