use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frames::{flat_frame_u, s_frame_unchecked, s_to_u_change_of_basis};
use super::metric::connection_matrices;
use super::params::{DiskPoint, LocalModelParams};
use crate::error::{Error, Result};
use crate::linalg::{c, Mat2};
use crate::special::{sin_pi_over, SERIES_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameBasis {
    SFrame,
    UFrame,
}

/// Monodromy of the flat connection around the puncture, acting on the
/// column vector of frame coefficients: continuing the frame `F` once
/// counter-clockwise gives `F · m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyMatrix {
    pub m: Mat2,
    pub basis: FrameBasis,
}

impl MonodromyMatrix {
    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn det(&self) -> Complex64 {
        self.m.determinant()
    }

    /// Both off-diagonal entries vanish (exactly).
    pub fn is_diagonal(&self) -> bool {
        self.m[(0, 1)] == c(0.0, 0.0) && self.m[(1, 0)] == c(0.0, 0.0)
    }
}

fn s_eigenvalues(p: &LocalModelParams) -> (Complex64, Complex64) {
    let (theta, beta) = (p.theta(), p.beta());
    (Complex64::from_polar(1.0, -PI * (beta + theta)), Complex64::from_polar(1.0, -PI * (beta - theta)))
}

/// Monodromy in the s-frame (diagonal, `θ > 0` only) or u-frame.
///
/// The u-frame matrix is `T^{-1} diag(λ₁, λ₂) T` with `T` the constant change
/// of basis from the s-frame. Below the series threshold the conjugation
/// loses accuracy, so the equivalent closed form
/// `e^{-iπβ} [[cos πθ, -iθ sin πθ], [-i sin(πθ)/θ, cos πθ]]` is used; at
/// `θ = 0` it is the parabolic element `e^{-iπβ} [[1, 0], [-iπ, 1]]`.
pub fn monodromy(p: &LocalModelParams, basis: FrameBasis) -> Result<MonodromyMatrix> {
    let theta = p.theta();
    let (l1, l2) = s_eigenvalues(p);
    let zero = c(0.0, 0.0);
    let m = match basis {
        FrameBasis::SFrame => {
            if p.is_cusp() {
                return Err(Error::Domain("s-frame monodromy undefined at theta = 0".into()));
            }
            Mat2::new(l1, zero, zero, l2)
        }
        FrameBasis::UFrame if theta >= SERIES_THRESHOLD => {
            let t = s_to_u_change_of_basis(theta)?;
            let t_inv = Mat2::new(c(theta, 0.0), c(theta, 0.0), c(1.0, 0.0), c(-1.0, 0.0));
            t_inv * Mat2::new(l1, zero, zero, l2) * t
        }
        FrameBasis::UFrame => {
            let phase = Complex64::from_polar(1.0, -PI * p.beta());
            let cos = (PI * theta).cos();
            let i = c(0.0, 1.0);
            Mat2::new(
                phase * cos,
                -phase * i * (theta * (PI * theta).sin()),
                -phase * i * sin_pi_over(theta),
                phase * cos,
            )
        }
    };
    Ok(MonodromyMatrix { m, basis })
}

/// Independent cross-check: integrate `∂_γ Y = -A_γ Y` around the circle
/// `|z| = r` from `γ = -π` with classical RK4, then conjugate the transport
/// by the frame at the base point. Requires integer `β` so that the
/// connection is single-valued on the loop.
pub fn transport_monodromy(p: &LocalModelParams, basis: FrameBasis, r: f64, steps: usize) -> Result<MonodromyMatrix> {
    if p.beta().fract() != 0.0 {
        return Err(Error::InvalidInput("parallel transport requires integer beta".into()));
    }
    if basis == FrameBasis::SFrame && p.is_cusp() {
        return Err(Error::Domain("s-frame monodromy undefined at theta = 0".into()));
    }
    if steps == 0 {
        return Err(Error::GridTooCoarse("transport needs at least one step".into()));
    }
    super::params::check_radius(r)?;
    let i = c(0.0, 1.0);
    let generator = |gamma: f64| -> Result<Mat2> {
        let z = DiskPoint::on_closed_slit(r, gamma);
        let conn = connection_matrices(p, &z)?;
        // dz = iz dγ, dz̄ = -iz̄ dγ.
        Ok(-(conn.dz_part * i - conn.dzbar_part * i))
    };
    let h = 2.0 * PI / steps as f64;
    let mut y = Mat2::identity();
    for k in 0..steps {
        let g = -PI + k as f64 * h;
        let k1 = generator(g)? * y;
        let half = c(0.5 * h, 0.0);
        let k2 = generator(g + 0.5 * h)? * (y + k1 * half);
        let k3 = generator(g + 0.5 * h)? * (y + k2 * half);
        let k4 = generator(g + h)? * (y + k3 * c(h, 0.0));
        y += (k1 + (k2 + k3) * c(2.0, 0.0) + k4) * c(h / 6.0, 0.0);
    }
    let base = DiskPoint::on_closed_slit(r, -PI);
    let frame = match basis {
        FrameBasis::SFrame => s_frame_unchecked(p, &base).columns,
        FrameBasis::UFrame => flat_frame_u(p, &base).columns,
    };
    let inv = frame.try_inverse().ok_or_else(|| Error::Domain("frame matrix singular at base point".into()))?;
    Ok(MonodromyMatrix { m: inv * y * frame, basis })
}
