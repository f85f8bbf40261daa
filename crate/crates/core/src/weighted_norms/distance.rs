use serde::{Deserialize, Serialize};

use super::{CylinderGrid, DOUBLINGS, GROWTH_THRESHOLD};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_space_distance, Hermitian2};

/// Hermitian metrics sampled on the nodes of a [`CylinderGrid`]. A metric
/// on a line bundle is stored as `diag(h, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    pub values: Vec<Hermitian2>,
}

impl MetricField {
    pub fn from_fn<F: Fn(f64, f64) -> Hermitian2>(grid: &CylinderGrid, f: F) -> Self {
        let mut values = Vec::with_capacity(grid.nodes());
        for i in 0..grid.n_t {
            for j in 0..grid.n_angle {
                values.push(f(grid.s(i), grid.angle(j)));
            }
        }
        Self { values }
    }

    pub fn scalar<F: Fn(f64, f64) -> f64>(grid: &CylinderGrid, f: F) -> Self {
        Self::from_fn(grid, |s, a| Hermitian2::diag(f(s, a), 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedDistance {
    pub sup: f64,
    pub argmax_node: usize,
    /// Largest distance on the outermost `t` slice.
    pub tail: f64,
}

fn check_pd(field: &MetricField, grid: &CylinderGrid) -> Result<()> {
    for (node, h) in field.values.iter().enumerate() {
        if !h.is_finite() || !h.is_positive_definite() {
            let (i, j) = (node / grid.n_angle, node % grid.n_angle);
            return Err(Error::NotPositiveDefinite { node, s: grid.s(i), gamma: grid.angle(j) });
        }
    }
    Ok(())
}

/// Sup over nodes of the symmetric-space distance between `h` and `k`.
pub fn bounded_distance(h: &MetricField, k: &MetricField, grid: &CylinderGrid) -> Result<BoundedDistance> {
    if h.values.len() != grid.nodes() || k.values.len() != grid.nodes() {
        return Err(Error::InvalidInput("metric fields do not match the grid".into()));
    }
    check_pd(h, grid)?;
    check_pd(k, grid)?;
    let mut sup = 0.0f64;
    let mut argmax_node = 0;
    let mut tail = 0.0f64;
    let tail_start = (grid.n_t - 1) * grid.n_angle;
    for (node, (a, b)) in h.values.iter().zip(&k.values).enumerate() {
        let d = symmetric_space_distance(a, b);
        if d > sup {
            sup = d;
            argmax_node = node;
        }
        if node >= tail_start {
            tail = tail.max(d);
        }
    }
    Ok(BoundedDistance { sup, argmax_node, tail })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub s_max: Vec<f64>,
    pub distances: Vec<BoundedDistance>,
    pub bounded: bool,
}

/// Numerical proxy for boundedness: recompute the sup distance on `grid`
/// and on three doublings of its `s` extent. Unbounded when the sup grows by
/// more than 1% at every doubling.
pub fn classify_boundedness<H, K>(h: H, k: K, grid: &CylinderGrid) -> Result<BoundednessReport>
where
    H: Fn(f64, f64) -> Hermitian2,
    K: Fn(f64, f64) -> Hermitian2,
{
    let mut g = *grid;
    let mut s_max = Vec::with_capacity(DOUBLINGS + 1);
    let mut distances = Vec::with_capacity(DOUBLINGS + 1);
    for _ in 0..=DOUBLINGS {
        let d = bounded_distance(&MetricField::from_fn(&g, &h), &MetricField::from_fn(&g, &k), &g)?;
        distances.push(d);
        s_max.push(g.t_max.exp());
        g = g.extended();
    }
    let growing = distances.windows(2).all(|w| w[1].sup > (1.0 + GROWTH_THRESHOLD) * w[0].sup);
    Ok(BoundednessReport { s_max, distances, bounded: !growing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_model::{eval_cone_metric, eval_cusp_metric, LocalModelParams};

    fn grid() -> CylinderGrid {
        CylinderGrid::from_s_range(1.0, 20.0, 200, 1, 0.25, 2.0).unwrap()
    }

    #[test]
    fn identical_fields_have_zero_distance() {
        let g = grid();
        let h = MetricField::from_fn(&g, |s, _| Hermitian2::diag(s, 1.0 / s));
        assert_eq!(bounded_distance(&h, &h, &g).unwrap().sup, 0.0);
    }

    #[test]
    fn sinh_against_power_is_bounded() {
        for theta in [0.25f64, 0.4, 0.75] {
            let h = move |s: f64, _| (theta * s).sinh() / theta;
            let k = move |s: f64, _| (theta * s).exp();
            let rep = classify_boundedness(
                |s, a| Hermitian2::diag(h(s, a), 1.0),
                |s, a| Hermitian2::diag(k(s, a), 1.0),
                &grid(),
            )
            .unwrap();
            assert!(rep.bounded, "{rep:?}");
            assert!((rep.distances[3].tail - (2.0 * theta).ln().abs()).abs() < 1e-3, "{rep:?}");
        }
    }

    #[test]
    fn cone_against_cusp_is_unbounded() {
        let p = LocalModelParams::new(0.5, 0.0).unwrap();
        let rep = classify_boundedness(
            |s, _| eval_cone_metric(&p, (-s).exp()).unwrap(),
            |s, _| eval_cusp_metric((-s).exp()).unwrap(),
            &grid(),
        )
        .unwrap();
        assert!(!rep.bounded, "{rep:?}");
    }

    #[test]
    fn indefinite_sample_located() {
        let g = grid();
        let good = MetricField::scalar(&g, |_, _| 1.0);
        let bad = MetricField::scalar(&g, |s, _| if s > 10.0 { -1.0 } else { 1.0 });
        match bounded_distance(&good, &bad, &g) {
            Err(Error::NotPositiveDefinite { s, .. }) => assert!(s > 10.0 && s < 10.2),
            other => panic!("{other:?}"),
        }
    }
}
