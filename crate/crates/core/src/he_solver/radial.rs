use serde::{Deserialize, Serialize};

use super::newton::{damped_newton, sup_norm, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use crate::special::sinhc;

/// `w*(s) = log(sinh(θs)/θ)`, and `log s` at `θ = 0`.
pub fn closed_form_w(theta: f64, s: f64) -> f64 {
    sinhc(theta, s).ln()
}

/// Uniform grid in `s` for the radial problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub nodes: usize,
}

impl SGrid {
    pub fn new(s_min: f64, s_max: f64, nodes: usize) -> Result<Self> {
        if !(s_min > 0.0 && s_max > s_min && s_max.is_finite()) {
            return Err(Error::Domain(format!("s interval [{s_min}, {s_max}] must lie in (0, inf)")));
        }
        if nodes < 3 {
            return Err(Error::GridTooCoarse(format!("{nodes} nodes, need at least 3")));
        }
        Ok(Self { s_min, s_max, nodes })
    }

    pub fn ds(&self) -> f64 {
        (self.s_max - self.s_min) / (self.nodes - 1) as f64
    }

    pub fn s(&self, i: usize) -> f64 {
        self.s_min + i as f64 * self.ds()
    }

    pub fn refined(&self) -> Self {
        Self { nodes: 2 * (self.nodes - 1) + 1, ..*self }
    }
}

/// `w'' + e^{-2w}` by central second differences at interior nodes
/// (`w.len() - 2` values).
pub fn reduced_residual(w: &[f64], ds: f64) -> Vec<f64> {
    let h2 = ds * ds;
    w.windows(3).map(|x| (x[0] - 2.0 * x[1] + x[2]) / h2 + (-2.0 * x[1]).exp()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub theta: f64,
    pub grid: SGrid,
    pub w: Vec<f64>,
    /// Interior residual of the final iterate.
    pub residual: Vec<f64>,
    pub iterations: usize,
    pub history: Vec<f64>,
    /// `max |w - w*|` over all nodes.
    pub sup_error: f64,
}

impl RadialSolution {
    pub fn s(&self) -> Vec<f64> {
        (0..self.grid.nodes).map(|i| self.grid.s(i)).collect()
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, 1)")));
    }
    Ok(())
}

/// Dirichlet problem on `grid` with closed-form end values, started from the
/// linear interpolant of the boundary data.
pub fn solve_radial_bvp(theta: f64, grid: &SGrid, config: &SolverConfig) -> Result<RadialSolution> {
    check_theta(theta)?;
    let (a, b) = (closed_form_w(theta, grid.s_min), closed_form_w(theta, grid.s_max));
    let n = grid.nodes;
    let initial: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    solve_radial_from(theta, grid, initial, config)
}

/// As [`solve_radial_bvp`] from a caller-supplied initial guess; its end
/// values are replaced by the Dirichlet data.
pub fn solve_radial_from(theta: f64, grid: &SGrid, mut w: Vec<f64>, config: &SolverConfig) -> Result<RadialSolution> {
    check_theta(theta)?;
    let n = grid.nodes;
    if w.len() != n {
        return Err(Error::InvalidInput(format!("initial guess has {} values for {n} nodes", w.len())));
    }
    let (a, b) = (closed_form_w(theta, grid.s_min), closed_form_w(theta, grid.s_max));
    let ds = grid.ds();
    let h2 = ds * ds;
    let full = |inner: &[f64]| {
        let mut v = Vec::with_capacity(n);
        v.push(a);
        v.extend_from_slice(inner);
        v.push(b);
        v
    };
    let residual = |inner: &[f64]| reduced_residual(&full(inner), ds);
    let step = |inner: &[f64], r: &[f64], iteration: usize| -> Result<Vec<f64>> {
        let m = inner.len();
        let lower = vec![1.0 / h2; m];
        let upper = vec![1.0 / h2; m];
        let diag: Vec<f64> = inner.iter().map(|x| -2.0 / h2 - 2.0 * (-2.0 * x).exp()).collect();
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        solve_tridiagonal(&lower, &diag, &upper, &rhs).ok_or(Error::SingularJacobian(iteration))
    };
    let mut inner = w[1..n - 1].to_vec();
    let outcome = damped_newton(&mut inner, residual, step, config)?;
    w = full(&inner);
    let sup_error =
        sup_norm(&w.iter().enumerate().map(|(i, x)| x - closed_form_w(theta, grid.s(i))).collect::<Vec<_>>());
    Ok(RadialSolution {
        theta,
        grid: *grid,
        residual: reduced_residual(&w, ds),
        w,
        iterations: outcome.iterations,
        history: outcome.history,
        sup_error,
    })
}
