use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::frobenius_distance;
use crate::local_model::{monodromy, FrameBasis, LocalModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonodromyDistance {
    pub theta: f64,
    /// `‖M_u(θ) - M_u(0)‖_F`.
    pub frobenius: f64,
    /// `|tr M_u(θ) - 2 cos(πθ) e^{-iπβ}|`.
    pub trace_gap: f64,
    /// `|λ₁ - λ₂|` for the eigenvalues of `M_u(θ)`.
    pub eigenvalue_gap: f64,
    pub det_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyConvergence {
    pub beta: f64,
    pub rows: Vec<MonodromyDistance>,
    /// `frobenius[k + 1] / frobenius[k]`.
    pub ratios: Vec<f64>,
    pub limit_trace: Complex64,
    /// `‖M_u(0) - e^{-iπβ} I‖_F`.
    pub limit_distance_to_scalar: f64,
}

/// Distances of the u-frame monodromy to its `θ = 0` limit along a
/// decreasing sequence of cone parameters.
pub fn monodromy_convergence(thetas: &[f64], beta: f64) -> Result<MonodromyConvergence> {
    if thetas.is_empty() || thetas.iter().any(|t| !(*t > 0.0 && *t < 1.0)) {
        return Err(Error::Domain("theta samples must lie in (0, 1)".into()));
    }
    if thetas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput("theta samples must be strictly decreasing".into()));
    }
    let limit = monodromy(&LocalModelParams::new(0.0, beta)?, FrameBasis::UFrame)?;
    let phase = Complex64::from_polar(1.0, -std::f64::consts::PI * beta);
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let m = monodromy(&LocalModelParams::new(theta, beta)?, FrameBasis::UFrame)?;
        let tr = m.trace();
        let det = m.det();
        let disc = (tr * tr - 4.0 * det).sqrt();
        rows.push(MonodromyDistance {
            theta,
            frobenius: frobenius_distance(&m.m, &limit.m),
            trace_gap: (tr - phase * (2.0 * (std::f64::consts::PI * theta).cos())).norm(),
            eigenvalue_gap: disc.norm(),
            det_gap: (det - phase * phase).norm(),
        });
    }
    let ratios = rows.windows(2).map(|w| w[1].frobenius / w[0].frobenius).collect();
    let scalar = crate::linalg::Mat2::identity() * phase;
    Ok(MonodromyConvergence {
        beta,
        rows,
        ratios,
        limit_trace: limit.trace(),
        limit_distance_to_scalar: frobenius_distance(&limit.m, &scalar),
    })
}
