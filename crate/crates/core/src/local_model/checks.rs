use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frames::{dbar_holomorphic_frame, flat_frame_u, s_frame_unchecked, FrameSample};
use super::metric::{apply_connection, connection_matrices, eval_cone_metric, eval_curvature, eval_higgs_adjoint};
use super::metric::{simpson_cusp_connection, ConnectionMatrices};
use super::params::{DiskPoint, LocalModelParams};
use crate::convergence::observed_orders;
use crate::error::{Error, Result};
use crate::linalg::c;

/// Radial nodes uniform in `s = -log r` (log-spaced in `r`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub nodes: usize,
}

impl RadialGrid {
    pub fn new(s_min: f64, s_max: f64, nodes: usize) -> Result<Self> {
        if !(s_min > 0.0 && s_max > s_min && s_max.is_finite()) {
            return Err(Error::Domain(format!("radial grid s in [{s_min}, {s_max}] not inside (0, inf)")));
        }
        if nodes < 4 {
            return Err(Error::GridTooCoarse(format!("{nodes} radial nodes, need at least 4")));
        }
        Ok(Self { s_min, s_max, nodes })
    }

    /// Grid covering `r ∈ [r_min, r_max] ⊂ (0, 1)`.
    pub fn from_r_range(r_min: f64, r_max: f64, nodes: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max < 1.0 && r_min < r_max) {
            return Err(Error::Domain(format!("r range [{r_min}, {r_max}] not inside (0, 1)")));
        }
        Self::new(-r_max.ln(), -r_min.ln(), nodes)
    }

    pub fn spacing(&self) -> f64 {
        (self.s_max - self.s_min) / (self.nodes - 1) as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        self.s_min + i as f64 * self.spacing()
    }

    pub fn r(&self, i: usize) -> f64 {
        (-self.s(i)).exp()
    }

    /// Halve the spacing; nodes of `self` remain nodes of the result.
    pub fn refined(&self) -> Self {
        Self { nodes: 2 * (self.nodes - 1) + 1, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeReport {
    pub theta: f64,
    pub beta: f64,
    pub nodes: usize,
    /// `max |4r² (F + [φ, φ*])|` from the two closed forms.
    pub closed_form_max_residual: f64,
    /// `max |(log h₁₁)_ss + c|` with the second derivative by central
    /// differences, interior nodes only.
    pub fd_max_residual: f64,
}

/// Hermitian–Einstein residual of `k_{β,θ}` on a radial grid, by closed
/// forms and by second differences of `log h₁₁`.
///
/// In the cylinder coordinate `s` the equation reads `(log h₁₁)_ss + c = 0`
/// where `c` is the adjoint-Higgs coefficient; both residuals are reported in
/// that normalisation (the dz̄∧dz coefficient times `4r²`).
pub fn check_hermitian_einstein(p: &LocalModelParams, grid: &RadialGrid) -> Result<HeReport> {
    he_report(p, grid, 1)
}

/// As [`check_hermitian_einstein`], but the finite-difference maximum is taken
/// over every `stride`-th node only, so that refined grids are compared on
/// the nodes they share with the coarsest one.
fn he_report(p: &LocalModelParams, grid: &RadialGrid, stride: usize) -> Result<HeReport> {
    let n = grid.nodes;
    let mut log_h = Vec::with_capacity(n);
    let mut coeff = Vec::with_capacity(n);
    let mut closed = 0.0f64;
    for i in 0..n {
        let r = grid.r(i);
        let f = eval_curvature(p, r)?;
        let cc = eval_higgs_adjoint(p, r)?;
        closed = closed.max((4.0 * r * r * f + cc).abs());
        log_h.push(eval_cone_metric(p, r)?.a.ln());
        coeff.push(cc);
    }
    let ds2 = grid.spacing().powi(2);
    let fd = (stride..n - 1)
        .step_by(stride)
        .map(|i| ((log_h[i + 1] - 2.0 * log_h[i] + log_h[i - 1]) / ds2 + coeff[i]).abs())
        .fold(0.0f64, f64::max);
    Ok(HeReport { theta: p.theta(), beta: p.beta(), nodes: n, closed_form_max_residual: closed, fd_max_residual: fd })
}

/// Run [`check_hermitian_einstein`] on `levels` successively halved grids and
/// return the reports with the observed orders of the finite-difference
/// residual, measured on the interior nodes of `base`.
pub fn he_convergence(p: &LocalModelParams, base: &RadialGrid, levels: usize) -> Result<(Vec<HeReport>, Vec<f64>)> {
    let mut grid = *base;
    let mut reports = Vec::with_capacity(levels);
    for level in 0..levels {
        reports.push(he_report(p, &grid, 1 << level)?);
        grid = grid.refined();
    }
    let errors: Vec<f64> = reports.iter().map(|r| r.fd_max_residual).collect();
    Ok((reports, observed_orders(&errors, 2.0)))
}

/// Tensor grid `[r_min, r_max] × [γ_min, γ_max]` inside the slit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnularGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub n_gamma: usize,
}

impl AnnularGrid {
    pub fn new(r_min: f64, r_max: f64, n_r: usize, gamma_min: f64, gamma_max: f64, n_gamma: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max < 1.0 && r_min < r_max) {
            return Err(Error::Domain(format!("annulus r in [{r_min}, {r_max}] not inside (0, 1)")));
        }
        if !(gamma_min > -PI && gamma_max < PI) {
            return Err(Error::BranchCut);
        }
        if gamma_min >= gamma_max {
            return Err(Error::InvalidInput("gamma_min must be below gamma_max".into()));
        }
        if n_r < 3 || n_gamma < 3 {
            return Err(Error::GridTooCoarse(format!("{n_r}x{n_gamma} annular grid, need at least 3x3")));
        }
        Ok(Self { r_min, r_max, n_r, gamma_min, gamma_max, n_gamma })
    }

    /// Default sector used by the checks: `r ∈ [0.2, 0.4]`, `|γ| ≤ 0.9π`.
    pub fn standard(n_r: usize, n_gamma: usize) -> Result<Self> {
        Self::new(0.2, 0.4, n_r, -0.9 * PI, 0.9 * PI, n_gamma)
    }

    pub fn dr(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_r - 1) as f64
    }

    pub fn dgamma(&self) -> f64 {
        (self.gamma_max - self.gamma_min) / (self.n_gamma - 1) as f64
    }

    pub fn point(&self, i: usize, j: usize) -> DiskPoint {
        DiskPoint { r: self.r_min + i as f64 * self.dr(), gamma: self.gamma_min + j as f64 * self.dgamma() }
    }

    pub fn refined(&self) -> Self {
        Self { n_r: 2 * (self.n_r - 1) + 1, n_gamma: 2 * (self.n_gamma - 1) + 1, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub theta: f64,
    pub beta: f64,
    pub n_r: usize,
    pub n_gamma: usize,
    /// `max |D s_j|` over interior nodes; absent at `θ = 0`.
    pub s_frame: Option<f64>,
    pub u_frame: f64,
    /// u-frame against Simpson's explicit `D_0` (only for `θ = 0`, `β = 0`).
    pub simpson_u_frame: Option<f64>,
    /// `max |d'' v^{0,1}|`.
    pub dbar_v: f64,
    /// `max |d' v^{0,1} - (θ²/2 w^{1,0} + β/2 v^{0,1}) z^{-1}dz|`.
    pub d_prime_v: f64,
}

impl FlatnessReport {
    /// Largest residual among the flat frames.
    pub fn max_flat_residual(&self) -> f64 {
        self.u_frame.max(self.s_frame.unwrap_or(0.0)).max(self.simpson_u_frame.unwrap_or(0.0))
    }
}

/// Expected `z D_z` of section `j` when it is not annihilated.
type DzTarget<'a> = &'a dyn Fn(&FrameSample, usize) -> [Complex64; 2];

/// Interior-node residuals `(max |z D_z σ - target_z|, max |z̄ D_z̄ σ|)` over
/// both sections of a frame, with derivatives by central differences.
fn frame_residuals<F, C>(
    grid: &AnnularGrid,
    stride: usize,
    frame: F,
    connection: C,
    dz_target: Option<DzTarget<'_>>,
) -> Result<(f64, f64)>
where
    F: Fn(&DiskPoint) -> FrameSample,
    C: Fn(&DiskPoint) -> Result<ConnectionMatrices>,
{
    let (nr, ng) = (grid.n_r, grid.n_gamma);
    let mut samples = Vec::with_capacity(nr * ng);
    for i in 0..nr {
        for j in 0..ng {
            samples.push(frame(&grid.point(i, j)));
        }
    }
    let idx = |i: usize, j: usize| i * ng + j;
    let (dr, dg) = (grid.dr(), grid.dgamma());
    let mut worst_z = 0.0f64;
    let mut worst_zbar = 0.0f64;
    for i in (stride..nr - 1).step_by(stride) {
        for j in (stride..ng - 1).step_by(stride) {
            let here = &samples[idx(i, j)];
            let conn = connection(&here.point)?;
            for col in 0..2 {
                let sigma = here.section(col);
                let rp = samples[idx(i + 1, j)].section(col);
                let rm = samples[idx(i - 1, j)].section(col);
                let gp = samples[idx(i, j + 1)].section(col);
                let gm = samples[idx(i, j - 1)].section(col);
                let r = here.point.r;
                let r_dr = [(rp[0] - rm[0]) * (r / (2.0 * dr)), (rp[1] - rm[1]) * (r / (2.0 * dr))];
                let d_gamma = [(gp[0] - gm[0]) / (2.0 * dg), (gp[1] - gm[1]) / (2.0 * dg)];
                let (mut z_part, zbar_part) = apply_connection(&conn, &sigma, &r_dr, &d_gamma);
                if let Some(target) = dz_target {
                    let t = target(here, col);
                    z_part = [z_part[0] - t[0], z_part[1] - t[1]];
                }
                worst_z = worst_z.max(z_part[0].norm()).max(z_part[1].norm());
                worst_zbar = worst_zbar.max(zbar_part[0].norm()).max(zbar_part[1].norm());
            }
        }
    }
    Ok((worst_z, worst_zbar))
}

/// Apply the full connection `D_θ` by finite differences in `(r, γ)` to the
/// flat frames and to `v^{0,1}`, reporting the maximal interior residuals.
pub fn check_flatness(p: &LocalModelParams, grid: &AnnularGrid) -> Result<FlatnessReport> {
    flatness_report(p, grid, 1)
}

fn flatness_report(p: &LocalModelParams, grid: &AnnularGrid, stride: usize) -> Result<FlatnessReport> {
    // Re-validate: grids built by struct literal bypass the constructor.
    AnnularGrid::new(grid.r_min, grid.r_max, grid.n_r, grid.gamma_min, grid.gamma_max, grid.n_gamma)?;
    let conn = |z: &DiskPoint| connection_matrices(p, z);

    let s_frame = if p.is_cusp() {
        None
    } else {
        let (a, b) = frame_residuals(grid, stride, |z| s_frame_unchecked(p, z), conn, None)?;
        Some(a.max(b))
    };
    let (a, b) = frame_residuals(grid, stride, |z| flat_frame_u(p, z), conn, None)?;
    let u_frame = a.max(b);

    let simpson_u_frame = if p.is_cusp() && p.beta() == 0.0 {
        let (a, b) = frame_residuals(grid, stride, |z| flat_frame_u(p, z), simpson_cusp_connection, None)?;
        Some(a.max(b))
    } else {
        None
    };

    let theta = p.theta();
    let beta = p.beta();
    // Column 0 is w^{1,0}: z D_z w^{1,0} = v/2 + β/2 w^{1,0}.
    // Column 1 is v: z D_z v = θ²/2 w^{1,0} + β/2 v.
    let target = move |f: &FrameSample, col: usize| -> [Complex64; 2] {
        let v = f.section(1);
        if col == 0 {
            [0.5 * v[0] + 0.5 * beta, 0.5 * v[1]]
        } else {
            [c(0.5 * theta * theta, 0.0) + 0.5 * beta * v[0], 0.5 * beta * v[1]]
        }
    };
    let (d_prime_v, dbar_v) = frame_residuals(grid, stride, |z| dbar_holomorphic_frame(p, z), conn, Some(&target))?;

    Ok(FlatnessReport {
        theta,
        beta,
        n_r: grid.n_r,
        n_gamma: grid.n_gamma,
        s_frame,
        u_frame,
        simpson_u_frame,
        dbar_v,
        d_prime_v,
    })
}

/// [`check_flatness`] on successively halved grids; returns the reports and
/// the observed orders of [`FlatnessReport::max_flat_residual`] on the
/// interior nodes of `base`.
pub fn flatness_convergence(
    p: &LocalModelParams,
    base: &AnnularGrid,
    levels: usize,
) -> Result<(Vec<FlatnessReport>, Vec<f64>)> {
    let mut grid = *base;
    let mut reports = Vec::with_capacity(levels);
    for level in 0..levels {
        reports.push(flatness_report(p, &grid, 1 << level)?);
        grid = grid.refined();
    }
    let errors: Vec<f64> = reports.iter().map(FlatnessReport::max_flat_residual).collect();
    Ok((reports, observed_orders(&errors, 2.0)))
}
