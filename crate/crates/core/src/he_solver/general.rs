use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weighted_norms::{weighted_lp_norm, CylinderGrid, SampledSection};

/// Diagonal metric `diag(h₁, h₂)` together with `|q|²`, where the Higgs
/// field is `[[0, 0], [q, 0]] dz/z` normalised so that the untwisted model
/// has `q ≡ 1`. Values are laid out like [`SampledSection`] scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHiggsField {
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    pub q_abs_sq: Vec<f64>,
}

impl DiagonalHiggsField {
    /// Sample `f(s, γ) -> (h₁, h₂, |q|²)` on the nodes of `grid`.
    pub fn from_fn<F: Fn(f64, f64) -> (f64, f64, f64)>(grid: &CylinderGrid, f: F) -> Self {
        let n = grid.nodes();
        let (mut h1, mut h2, mut q_abs_sq) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for i in 0..grid.n_t {
            for j in 0..grid.n_angle {
                let (a, b, c) = f(grid.s(i), grid.angle(j));
                h1.push(a);
                h2.push(b);
                q_abs_sq.push(c);
            }
        }
        Self { h1, h2, q_abs_sq }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralResidual {
    /// Interior `t` nodes of the input grid.
    pub grid: CylinderGrid,
    /// The two diagonal entries of `Λ(F_h + [φ, φ*])` per node.
    pub residual: SampledSection,
    pub sup: f64,
    pub weighted_norm: f64,
}

/// `Λ(F_h + [φ, φ*])` for a diagonal metric, with `Λ` taken against the
/// cusp metric `(ds² + dγ²)/s²`:
/// `s² · diag(Δ log h₁ + |q|² h₂/h₁, Δ log h₂ - |q|² h₂/h₁)` where
/// `Δ = ∂_s² + ∂_γ² = e^{-2t}(∂_t² - ∂_t) + ∂_γ²` on the `t`-uniform grid.
/// The weighted norm uses the grid's own `δ` and `p`.
pub fn he_residual_general(field: &DiagonalHiggsField, grid: &CylinderGrid) -> Result<GeneralResidual> {
    let n = grid.nodes();
    if field.h1.len() != n || field.h2.len() != n || field.q_abs_sq.len() != n {
        return Err(Error::InvalidInput("field samples do not match the grid".into()));
    }
    if grid.n_t < 3 || grid.n_angle == 2 {
        return Err(Error::GridTooCoarse(format!("{}x{} grid has no interior", grid.n_t, grid.n_angle)));
    }
    for k in 0..n {
        if !(field.h1[k] > 0.0 && field.h2[k] > 0.0 && field.h1[k].is_finite() && field.h2[k].is_finite()) {
            let (i, j) = (k / grid.n_angle, k % grid.n_angle);
            return Err(Error::NotPositiveDefinite { node: k, s: grid.s(i), gamma: grid.angle(j) });
        }
    }
    let na = grid.n_angle;
    let dt = grid.dt();
    let dphi = 2.0 * std::f64::consts::PI / na as f64;
    let log1: Vec<f64> = field.h1.iter().map(|x| x.ln()).collect();
    let log2: Vec<f64> = field.h2.iter().map(|x| x.ln()).collect();
    let laplacian = |u: &[f64], i: usize, j: usize| -> f64 {
        let c = u[i * na + j];
        let u_tt = (u[(i + 1) * na + j] - 2.0 * c + u[(i - 1) * na + j]) / (dt * dt);
        let u_t = (u[(i + 1) * na + j] - u[(i - 1) * na + j]) / (2.0 * dt);
        let u_aa = if na < 3 {
            0.0
        } else {
            (u[i * na + (j + 1) % na] - 2.0 * c + u[i * na + (j + na - 1) % na]) / (dphi * dphi)
        };
        (-2.0 * grid.t(i)).exp() * (u_tt - u_t) + u_aa
    };
    let mut values = Vec::with_capacity(2 * (grid.n_t - 2) * na);
    let mut sup = 0.0f64;
    for i in 1..grid.n_t - 1 {
        let s2 = grid.s(i).powi(2);
        for j in 0..na {
            let k = i * na + j;
            let bracket = field.q_abs_sq[k] * field.h2[k] / field.h1[k];
            let a = s2 * (laplacian(&log1, i, j) + bracket);
            let b = s2 * (laplacian(&log2, i, j) - bracket);
            sup = sup.max(a.abs()).max(b.abs());
            values.push(Complex64::new(a, 0.0));
            values.push(Complex64::new(b, 0.0));
        }
    }
    let inner = CylinderGrid::new(grid.t(1), grid.t(grid.n_t - 2), grid.n_t - 2, na, grid.delta, grid.p)?;
    let residual = SampledSection::new(&inner, 2, 0, values)?;
    let weighted_norm = weighted_lp_norm(&residual, &inner)?;
    Ok(GeneralResidual { grid: inner, residual, sup, weighted_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::sinhc;

    fn grid(t_max: f64, n_t: usize) -> CylinderGrid {
        CylinderGrid::new(0.5, t_max, n_t, 8, 0.25, 3.0).unwrap()
    }

    fn model(theta: f64) -> impl Fn(f64, f64) -> (f64, f64, f64) {
        move |s, _| {
            let h = sinhc(theta, s);
            (h, 1.0 / h, 1.0)
        }
    }

    #[test]
    fn model_metric_residual_is_discretisation_error() {
        let mut sups = Vec::new();
        for n in [201, 401, 801] {
            let g = grid(2.0, n);
            let rep = he_residual_general(&DiagonalHiggsField::from_fn(&g, model(0.5)), &g).unwrap();
            sups.push(rep.sup);
        }
        assert!(sups[2] < 1e-3, "{sups:?}");
        let orders = crate::convergence::observed_orders(&sups, 2.0);
        assert!(orders.iter().all(|o| *o > 1.7), "{orders:?}");
    }

    #[test]
    fn twisted_model_balances() {
        // h₁ = r^β sinh(θs)/θ, |q|² = r^{2β}.
        let g = grid(2.0, 801);
        let f = DiagonalHiggsField::from_fn(&g, |s, _| {
            let h = (-s).exp() * sinhc(0.5, s);
            (h, 1.0 / h, (-2.0 * s).exp())
        });
        assert!(he_residual_general(&f, &g).unwrap().sup < 1e-3);
    }

    #[test]
    fn wrong_weight_has_finite_norm() {
        // diag(r^{-θ'}, r^{θ'}): Δ log h = 0, bracket e^{-2θ's}.
        let theta = 0.4;
        let field = |s: f64, _: f64| ((theta * s).exp(), (-theta * s).exp(), 1.0);
        let mut norms = Vec::new();
        let mut g = grid(2.5, 401);
        for _ in 0..4 {
            norms.push(he_residual_general(&DiagonalHiggsField::from_fn(&g, field), &g).unwrap().weighted_norm);
            g = g.extended();
        }
        assert!(norms.iter().all(|x| x.is_finite()));
        let growth: Vec<f64> = norms.windows(2).map(|w| w[1] / w[0] - 1.0).collect();
        assert!(growth.iter().all(|x| *x < 0.01), "{growth:?}");
    }

    #[test]
    fn bump_is_local() {
        let g = grid(2.0, 401);
        let bump = |t: f64| if (t - 1.2).abs() < 0.3 { (-1.0 / (1.0 - ((t - 1.2) / 0.3).powi(2))).exp() } else { 0.0 };
        let m = model(0.5);
        let field = DiagonalHiggsField::from_fn(&g, |s, a| {
            let (h1, h2, q) = m(s, a);
            let e = bump(s.ln()).exp();
            (h1 * e, h2 * e, q)
        });
        let rep = he_residual_general(&field, &g).unwrap();
        let na = g.n_angle;
        for i in 0..rep.grid.n_t {
            let t = rep.grid.t(i);
            let a = rep.residual.values()[2 * i * na].re;
            let b = rep.residual.values()[2 * i * na + 1].re;
            if (t - 1.2).abs() > 0.32 {
                assert!(a.abs() < 1e-3 && b.abs() < 1e-3, "t = {t}: {a} {b}");
            }
        }
        assert!(rep.sup > 0.1);
    }

    #[test]
    fn indefinite_metric_rejected() {
        let g = grid(2.0, 11);
        let f = DiagonalHiggsField::from_fn(&g, |s, _| (if s > 4.0 { -1.0 } else { 1.0 }, 1.0, 1.0));
        assert!(matches!(he_residual_general(&f, &g), Err(Error::NotPositiveDefinite { .. })));
    }
}
