use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{weighted_lp_norm, CylinderGrid, SampledSection, DOUBLINGS, GROWTH_THRESHOLD};
use crate::error::{Error, Result};

/// Smoothstep cutoff `3τ² - 2τ³`, `τ = clamp(t, 0, 1)`.
pub fn cutoff(t: f64) -> f64 {
    let tau = t.clamp(0.0, 1.0);
    tau * tau * (3.0 - 2.0 * tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HatMembership {
    /// Asymptotic constant `C` of the identity direction.
    pub constant: Complex64,
    /// `‖f - C χ(t) id‖_{L^p_δ}`.
    pub remainder_norm: f64,
}

fn identity_slots(components: usize) -> Result<&'static [usize]> {
    match components {
        1 => Ok(&[0]),
        4 => Ok(&[0, 3]),
        _ => Err(Error::InvalidInput(format!("no identity direction for {components}-component sections"))),
    }
}

/// Split `f = C χ(t) id + η` with `C` the angular mean of the identity
/// component on the last `t` slice, and measure `η`.
pub fn membership_hat_space(f: &SampledSection, grid: &CylinderGrid) -> Result<HatMembership> {
    f.check_shape(grid)?;
    let slots = identity_slots(f.components)?;
    let last = grid.n_t - 1;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..grid.n_angle {
        for &c in slots {
            sum += f.get(last, j, c, grid);
        }
    }
    let constant = sum / (grid.n_angle * slots.len()) as f64;
    let mut rest = f.clone();
    let nc = f.components;
    for i in 0..grid.n_t {
        let shift = constant * cutoff(grid.t(i));
        for j in 0..grid.n_angle {
            let base = (i * grid.n_angle + j) * nc;
            for &c in slots {
                rest.values_mut()[base + c] -= shift;
            }
        }
    }
    Ok(HatMembership { constant, remainder_norm: weighted_lp_norm(&rest, grid)? })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HatClassification {
    pub s_max: Vec<f64>,
    pub decompositions: Vec<HatMembership>,
    /// Remainder norm grew by more than 1% at every doubling of `s_max`.
    pub divergent: bool,
}

/// Repeat [`membership_hat_space`] on `grid` and three successive doublings
/// of its `s` extent, sampling `f` afresh each time.
pub fn classify_hat_membership<F>(f: F, grid: &CylinderGrid) -> Result<HatClassification>
where
    F: Fn(&CylinderGrid) -> SampledSection,
{
    let mut g = *grid;
    let mut s_max = Vec::with_capacity(DOUBLINGS + 1);
    let mut decompositions = Vec::with_capacity(DOUBLINGS + 1);
    for _ in 0..=DOUBLINGS {
        decompositions.push(membership_hat_space(&f(&g), &g)?);
        s_max.push(g.t_max.exp());
        g = g.extended();
    }
    let divergent =
        decompositions.windows(2).all(|w| w[1].remainder_norm > (1.0 + GROWTH_THRESHOLD) * w[0].remainder_norm);
    Ok(HatClassification { s_max, decompositions, divergent })
}
