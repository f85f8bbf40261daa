//! Weighted `L^p` and Sobolev norms on the cylinder end `t = log|log r|`,
//! and bounded-distance checks between metric fields.

mod distance;
mod grid;
mod hat;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use distance::{bounded_distance, classify_boundedness, BoundedDistance, BoundednessReport, MetricField};
pub use grid::{cylinder_coords, CylinderGrid, SampledSection};
pub use hat::{classify_hat_membership, cutoff, membership_hat_space, HatClassification, HatMembership};

/// Relative increase per doubling above which a quantity is deemed to grow
/// without bound.
pub const GROWTH_THRESHOLD: f64 = 0.01;

/// Number of grid extensions used by the unboundedness proxies.
pub const DOUBLINGS: usize = 3;

/// Coefficients of a connection acting diagonally on the components of a
/// section: `(∇_t f)_c = ∂_t f_c + a_t[c] f_c`, likewise in the angle.
/// Arrays are laid out like [`SampledSection`] values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalConnection {
    pub a_t: Vec<Complex64>,
    pub a_angle: Vec<Complex64>,
}

impl DiagonalConnection {
    pub fn from_fn<F>(grid: &CylinderGrid, components: usize, f: F) -> Self
    where
        F: Fn(f64, f64, usize) -> (Complex64, Complex64),
    {
        let mut a_t = Vec::with_capacity(grid.nodes() * components);
        let mut a_angle = Vec::with_capacity(grid.nodes() * components);
        for i in 0..grid.n_t {
            for j in 0..grid.n_angle {
                for c in 0..components {
                    let (x, y) = f(grid.t(i), grid.angle(j), c);
                    a_t.push(x);
                    a_angle.push(y);
                }
            }
        }
        Self { a_t, a_angle }
    }

    /// Repeat each node's coefficients `times` times, matching the layout of
    /// a gradient section.
    fn widened(&self, components: usize, times: usize) -> Self {
        let widen = |v: &[Complex64]| {
            v.chunks(components).flat_map(|c| c.iter().cycle().take(components * times).copied()).collect()
        };
        Self { a_t: widen(&self.a_t), a_angle: widen(&self.a_angle) }
    }
}

fn check_finite(f: &SampledSection) -> Result<()> {
    match f.values().iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        Some(k) => Err(Error::NonFinite(k / f.components)),
        None => Ok(()),
    }
}

/// `(∫∫ |e^{δt} f|^p dt dφ)^{1/p}`, trapezoidal in `t` and periodic
/// rectangle rule in the angle.
pub fn weighted_lp_norm(f: &SampledSection, grid: &CylinderGrid) -> Result<f64> {
    f.check_shape(grid)?;
    check_finite(f)?;
    let dphi = 2.0 * std::f64::consts::PI / grid.n_angle as f64;
    let dt = grid.dt();
    let mut total = 0.0;
    for i in 0..grid.n_t {
        let end = i == 0 || i + 1 == grid.n_t;
        let wt = if end { 0.5 * dt } else { dt };
        let weight = (grid.delta * grid.t(i)).exp();
        let mut ring = 0.0;
        for j in 0..grid.n_angle {
            ring += (weight * f.pointwise_norm(i, j, grid)).powf(grid.p);
        }
        total += wt * dphi * ring;
    }
    Ok(total.powf(1.0 / grid.p))
}

/// Covariant gradient `(∇_t f, ∇_φ f)` by second-order differences: central
/// in the interior, one-sided at the two `t` ends, periodic in the angle.
/// The result has twice as many components, `t` part first at each node.
fn covariant_gradient(f: &SampledSection, grid: &CylinderGrid, conn: Option<&DiagonalConnection>) -> SampledSection {
    let nc = f.components;
    let (nt, na) = (grid.n_t, grid.n_angle);
    let dt = grid.dt();
    let dphi = 2.0 * std::f64::consts::PI / na as f64;
    let at = |i: usize, j: usize, c: usize| f.get(i, j, c, grid);
    let mut out = Vec::with_capacity(2 * f.values().len());
    for i in 0..nt {
        for j in 0..na {
            let node = i * na + j;
            let mut d_t = Vec::with_capacity(nc);
            let mut d_phi = Vec::with_capacity(nc);
            for c in 0..nc {
                let dt_val = if i == 0 {
                    (-3.0 * at(0, j, c) + 4.0 * at(1, j, c) - at(2, j, c)) / (2.0 * dt)
                } else if i + 1 == nt {
                    (3.0 * at(nt - 1, j, c) - 4.0 * at(nt - 2, j, c) + at(nt - 3, j, c)) / (2.0 * dt)
                } else {
                    (at(i + 1, j, c) - at(i - 1, j, c)) / (2.0 * dt)
                };
                let dphi_val = if na < 3 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (at(i, (j + 1) % na, c) - at(i, (j + na - 1) % na, c)) / (2.0 * dphi)
                };
                let value = at(i, j, c);
                let (ct, cp) = match conn {
                    Some(a) => (a.a_t[node * nc + c] * value, a.a_angle[node * nc + c] * value),
                    None => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                };
                d_t.push(dt_val + ct);
                d_phi.push(dphi_val + cp);
            }
            out.extend(d_t);
            out.extend(d_phi);
        }
    }
    SampledSection::from_raw(2 * nc, f.form_degree + 1, out)
}

/// `Σ_{j ≤ k} ‖∇^j f‖_{L^p_δ}` with pointwise norms taken in the flat
/// cylinder metric `dt² + dφ²`.
pub fn weighted_sobolev_norm(
    f: &SampledSection,
    k: usize,
    grid: &CylinderGrid,
    conn: Option<&DiagonalConnection>,
) -> Result<f64> {
    if k > 2 {
        return Err(Error::InvalidInput(format!("derivative order {k} above 2")));
    }
    f.check_shape(grid)?;
    if k > 0 && (grid.n_t < 3 || grid.n_angle == 2) {
        return Err(Error::GridTooCoarse(format!(
            "{}x{} cylinder grid cannot carry order-{k} differences",
            grid.n_t, grid.n_angle
        )));
    }
    if let Some(a) = conn {
        if a.a_t.len() != f.values().len() || a.a_angle.len() != f.values().len() {
            return Err(Error::InvalidInput("connection coefficients do not match the section layout".into()));
        }
    }
    let mut total = weighted_lp_norm(f, grid)?;
    let mut current = f.clone();
    let mut current_conn = conn.cloned();
    for _ in 0..k {
        let grad = covariant_gradient(&current, grid, current_conn.as_ref());
        current_conn = current_conn.map(|a| a.widened(current.components, 2));
        total += weighted_lp_norm(&grad, grid)?;
        current = grad;
    }
    Ok(total)
}
