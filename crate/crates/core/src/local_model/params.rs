use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Hermitian2;

/// Metric on the fibre `ℂ²` at one point.
pub type MetricSample = Hermitian2;

/// One member of the explicit family: cone parameter `θ` (cone angle `2πθ`)
/// and twist `β` (`β = 0` plain model, `β = 1` the twisted model used for
/// hyperbolic cone metrics).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalModelParams {
    theta: f64,
    beta: f64,
}

impl LocalModelParams {
    pub fn new(theta: f64, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, 1)")));
        }
        if !beta.is_finite() {
            return Err(Error::Domain(format!("beta = {beta} is not finite")));
        }
        Ok(Self { theta, beta })
    }

    /// Untwisted model with cone parameter `theta`.
    pub fn plain(theta: f64) -> Result<Self> {
        Self::new(theta, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_cusp(&self) -> bool {
        self.theta == 0.0
    }
}

/// A point `z = r e^{iγ}` of the slit disk `U = {0 < r < 1, -π < γ < π}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub r: f64,
    pub gamma: f64,
}

impl DiskPoint {
    pub fn new(r: f64, gamma: f64) -> Result<Self> {
        check_radius(r)?;
        if !(gamma > -PI && gamma < PI) {
            return Err(Error::Domain(format!("gamma = {gamma} outside (-pi, pi)")));
        }
        Ok(Self { r, gamma })
    }

    /// Same as [`DiskPoint::new`] but admits the edges `γ = ±π` of the slit;
    /// used by the parallel-transport cross-check.
    pub(crate) fn on_closed_slit(r: f64, gamma: f64) -> Self {
        Self { r, gamma }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.gamma)
    }

    /// Principal branch `log z = log r + iγ`.
    pub fn log_z(&self) -> Complex64 {
        Complex64::new(self.r.ln(), self.gamma)
    }

    /// `z^a = exp(a log z)` on the fixed branch.
    pub fn pow(&self, a: f64) -> Complex64 {
        Complex64::from_polar(self.r.powf(a), a * self.gamma)
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("r = {r} outside (0, 1)")))
    }
}
