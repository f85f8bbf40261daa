use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::{DiskPoint, LocalModelParams};
use crate::error::{Error, Result};
use crate::linalg::{c, Mat2};
use crate::special::{sinhc_complex, theta_coth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameTag {
    /// `{w^{1,0}, w^{0,1}}`.
    Holomorphic,
    /// `{w^{1,0}, v^{0,1}}`, holomorphic for `d'' = ∂̄ + φ*`.
    DbarHolomorphic,
    /// `{s_1, s_2}`, flat with diagonal monodromy.
    SFlat,
    /// `{u^{1,0}, u^{0,1}}`, flat with a finite `θ → 0` limit.
    UFlat,
}

/// Two sections expressed in the `{w^{1,0}, w^{0,1}}` basis; column `j` holds
/// the components of section `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample {
    pub tag: FrameTag,
    pub point: DiskPoint,
    pub columns: Mat2,
}

impl FrameSample {
    pub fn section(&self, j: usize) -> [Complex64; 2] {
        [self.columns[(0, j)], self.columns[(1, j)]]
    }

    pub fn determinant(&self) -> Complex64 {
        self.columns.determinant()
    }
}

/// Components of `v^{0,1} = z^β w^{0,1} + θ coth(θ log r) w^{1,0}`.
fn v_section(p: &LocalModelParams, z: &DiskPoint) -> [Complex64; 2] {
    [c(theta_coth(p.theta(), z.r.ln()), 0.0), z.pow(p.beta())]
}

fn columns(first: [Complex64; 2], second: [Complex64; 2]) -> Mat2 {
    Mat2::new(first[0], second[0], first[1], second[1])
}

pub fn dbar_holomorphic_frame(p: &LocalModelParams, z: &DiskPoint) -> FrameSample {
    let w10 = [c(1.0, 0.0), c(0.0, 0.0)];
    FrameSample { tag: FrameTag::DbarHolomorphic, point: *z, columns: columns(w10, v_section(p, z)) }
}

pub(crate) fn s_frame_unchecked(p: &LocalModelParams, z: &DiskPoint) -> FrameSample {
    let theta = p.theta();
    let beta = p.beta();
    let v = v_section(p, z);
    let f1 = z.pow(-0.5 * (beta + theta));
    let f2 = z.pow(-0.5 * (beta - theta));
    let s1 = [f1 * (v[0] + theta), f1 * v[1]];
    let s2 = [f2 * (c(theta, 0.0) - v[0]), -f2 * v[1]];
    FrameSample { tag: FrameTag::SFlat, point: *z, columns: columns(s1, s2) }
}

/// Flat sections `s_1 = z^{-(β+θ)/2}(θ w^{1,0} + v^{0,1})` and
/// `s_2 = z^{-(β-θ)/2}(θ w^{1,0} - v^{0,1})`. They degenerate at `θ = 0`.
pub fn flat_frame_s(p: &LocalModelParams, z: &DiskPoint) -> Result<FrameSample> {
    if p.is_cusp() {
        return Err(Error::Domain("s-frame is degenerate at theta = 0; use the u-frame".into()));
    }
    Ok(s_frame_unchecked(p, z))
}

/// Flat sections `u^{1,0} = (s_1 + s_2)/2θ`, `u^{0,1} = (s_1 - s_2)/2`,
/// written as `z^{-β/2}` times `cosh`/`sinh` combinations of `θ log z / 2`
/// so that `θ = 0` gives `z^{-β/2}(w^{1,0} - ½ log z v^{0,1})` and
/// `z^{-β/2} v^{0,1}` directly.
pub fn flat_frame_u(p: &LocalModelParams, z: &DiskPoint) -> FrameSample {
    let theta = p.theta();
    let half_log = z.log_z() * 0.5;
    let cosh = (half_log * theta).cosh();
    let sinh_over = sinhc_complex(theta, half_log);
    let prefactor = z.pow(-0.5 * p.beta());
    let v = v_section(p, z);
    let u10 = [prefactor * (cosh - sinh_over * v[0]), prefactor * (-sinh_over * v[1])];
    let u01 = [prefactor * (-sinh_over * theta * theta + cosh * v[0]), prefactor * (cosh * v[1])];
    FrameSample { tag: FrameTag::UFlat, point: *z, columns: columns(u10, u01) }
}

/// Constant `T` with `[u^{1,0} u^{0,1}] = [s_1 s_2] T`.
pub fn s_to_u_change_of_basis(theta: f64) -> Result<Mat2> {
    if theta == 0.0 {
        return Err(Error::Domain("change of basis is singular at theta = 0".into()));
    }
    let a = 0.5 / theta;
    Ok(Mat2::new(c(a, 0.0), c(0.5, 0.0), c(a, 0.0), c(-0.5, 0.0)))
}

/// Evaluate any tagged frame.
pub fn frame_at(p: &LocalModelParams, tag: FrameTag, z: &DiskPoint) -> Result<FrameSample> {
    match tag {
        FrameTag::Holomorphic => Ok(FrameSample { tag, point: *z, columns: Mat2::identity() }),
        FrameTag::DbarHolomorphic => Ok(dbar_holomorphic_frame(p, z)),
        FrameTag::SFlat => flat_frame_s(p, z),
        FrameTag::UFlat => Ok(flat_frame_u(p, z)),
    }
}
