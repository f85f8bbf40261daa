use serde::{Deserialize, Serialize};

use super::metric::eval_cone_metric;
use super::params::LocalModelParams;
use crate::error::{Error, Result};
use crate::linalg::fit_slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionTag {
    W10,
    W01,
    /// `z w^{0,1}`, the section of `E^{0,1}[-p]` in the twisted model.
    ZW01,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub fitted: f64,
    pub predicted: f64,
}

/// Exponent `e` with `|section|_k ~ r^e` as `r → 0`, for `θ > 0`.
pub fn predicted_growth_exponent(p: &LocalModelParams, tag: SectionTag) -> f64 {
    let (theta, beta) = (p.theta(), p.beta());
    match tag {
        SectionTag::W10 => 0.5 * (beta - theta),
        SectionTag::W01 => 0.5 * (theta - beta),
        SectionTag::ZW01 => 1.0 + 0.5 * (theta - beta),
    }
}

/// Least-squares slope of `log |section|_{k_{β,θ}}` against `log r`.
pub fn section_growth_exponent(p: &LocalModelParams, tag: SectionTag, r_grid: &[f64]) -> Result<GrowthFit> {
    if r_grid.len() < 8 {
        return Err(Error::GridTooCoarse(format!("{} radii, need at least 8", r_grid.len())));
    }
    let mut xs = Vec::with_capacity(r_grid.len());
    let mut ys = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let h = eval_cone_metric(p, r)?;
        let norm_sq = match tag {
            SectionTag::W10 => h.a,
            SectionTag::W01 => h.d,
            SectionTag::ZW01 => r * r * h.d,
        };
        xs.push(r.ln());
        ys.push(0.5 * norm_sq.ln());
    }
    Ok(GrowthFit { fitted: fit_slope(&xs, &ys), predicted: predicted_growth_exponent(p, tag) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_radii() -> Vec<f64> {
        (0..16).map(|k| 10f64.powf(-8.0 + 3.0 * k as f64 / 15.0)).collect()
    }

    #[test]
    fn growth_examples() {
        let grid = small_radii();
        let p0 = LocalModelParams::new(0.4, 0.0).unwrap();
        let p1 = LocalModelParams::new(0.4, 1.0).unwrap();
        let cases = [
            (p0, SectionTag::W10, -0.2),
            (p0, SectionTag::W01, 0.2),
            (p1, SectionTag::W10, 0.3),
            (p1, SectionTag::ZW01, 0.7),
        ];
        for (p, tag, expected) in cases {
            let fit = section_growth_exponent(&p, tag, &grid).unwrap();
            assert!((fit.predicted - expected).abs() < 1e-15);
            assert!((fit.fitted - expected).abs() < 1e-3, "{tag:?}: {fit:?}");
        }
    }

    #[test]
    fn short_grid_rejected() {
        let p = LocalModelParams::new(0.4, 0.0).unwrap();
        assert!(section_growth_exponent(&p, SectionTag::W10, &[1e-3; 7]).is_err());
    }
}
