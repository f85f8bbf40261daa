use serde::{Deserialize, Serialize};

use super::family::FamilyTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeEstimate {
    pub theta: f64,
    /// Richardson-extrapolated central difference.
    pub value: f64,
    /// `|D(h) - D(2h)| / 3`, the size of the extrapolation correction.
    pub error_bar: f64,
}

fn central(values: &[f64], i: usize, step: usize, h: f64, order: usize) -> f64 {
    let f = |k: isize| values[(i as isize + k * step as isize) as usize];
    match order {
        1 => (f(1) - f(-1)) / (2.0 * h),
        2 => (f(1) - 2.0 * f(0) + f(-1)) / (h * h),
        _ => (f(2) - 2.0 * f(1) + 2.0 * f(-1) - f(-2)) / (2.0 * h * h * h),
    }
}

/// Derivatives of order 1–3 at every sample whose doubled stencil fits.
pub fn derivative_samples(thetas: &[f64], values: &[f64], order: usize) -> Result<Vec<DerivativeEstimate>> {
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidInput(format!("derivative order {order} not in 1..=3")));
    }
    if thetas.len() != values.len() || thetas.len() < 3 {
        return Err(Error::InvalidInput("need matching theta/value lists of length at least 3".into()));
    }
    let h = (thetas[thetas.len() - 1] - thetas[0]) / (thetas.len() - 1) as f64;
    if thetas.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300)) || !(h > 0.0) {
        return Err(Error::NonUniformSpacing);
    }
    let reach = if order == 3 { 2 } else { 1 };
    let mut out = Vec::new();
    for i in 0..thetas.len() {
        if i < 2 * reach || i + 2 * reach >= thetas.len() {
            continue;
        }
        let fine = central(values, i, 1, h, order);
        let coarse = central(values, i, 2, 2.0 * h, order);
        out.push(DerivativeEstimate {
            theta: thetas[i],
            value: (4.0 * fine - coarse) / 3.0,
            error_bar: (fine - coarse).abs() / 3.0,
        });
    }
    if out.is_empty() {
        return Err(Error::GridTooCoarse(format!("too few samples for order-{order} Richardson differences")));
    }
    Ok(out)
}

pub fn finite_difference_derivative(
    table: &FamilyTable,
    probe: usize,
    order: usize,
) -> Result<Vec<DerivativeEstimate>> {
    if probe >= table.probes.len() {
        return Err(Error::InvalidInput(format!("probe index {probe} out of range")));
    }
    derivative_samples(&table.thetas(), &table.column(probe), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyticity::family::{solve_family, FamilyConfig, FamilyMode};

    fn thetas() -> Vec<f64> {
        (0..21).map(|k| 0.2 + 0.02 * k as f64).collect()
    }

    #[test]
    fn closed_form_derivative_within_bar() {
        let s0 = 2.0f64;
        let t = solve_family(&thetas(), FamilyMode::ClosedForm, &[s0], &FamilyConfig::default()).unwrap();
        for est in finite_difference_derivative(&t, 0, 1).unwrap() {
            let th = est.theta;
            let exact = s0 / (th * s0).tanh() - 1.0 / th;
            assert!((est.value - exact).abs() <= est.error_bar, "{est:?} vs {exact}");
        }
    }

    #[test]
    fn synthetic_tables() {
        let ts = thetas();
        let c = FamilyTable::synthetic(&ts, |_| 4.2).unwrap();
        assert!(finite_difference_derivative(&c, 0, 1).unwrap().iter().all(|e| e.value == 0.0));
        let sq = FamilyTable::synthetic(&ts, |t| t * t).unwrap();
        for e in finite_difference_derivative(&sq, 0, 2).unwrap() {
            assert!((e.value - 2.0).abs() < 1e-9, "{e:?}");
        }
        let cube = FamilyTable::synthetic(&ts, |t| t * t * t).unwrap();
        for e in finite_difference_derivative(&cube, 0, 3).unwrap() {
            assert!((e.value - 6.0).abs() < 1e-6, "{e:?}");
        }
        assert!(finite_difference_derivative(&sq, 0, 4).is_err());
    }

    #[test]
    fn non_uniform_spacing_rejected() {
        let ts = [0.1, 0.2, 0.35, 0.4, 0.5];
        assert_eq!(derivative_samples(&ts, &[0.0; 5], 1), Err(Error::NonUniformSpacing));
    }
}
