use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::family::FamilyTable;
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 10;
/// Highest degree fitted in the monomial basis.
pub const MAX_MONOMIAL_DEGREE: usize = 5;
/// Condition number above which the monomial basis is abandoned.
pub const MAX_CONDITION: f64 = 1e8;
/// Residual ratio below which a degree step counts as geometric decay.
pub const DECAY_RATIO: f64 = 0.5;
pub const MIN_DECAY_STEPS: usize = 4;
pub const MIN_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitBasis {
    Monomial,
    /// Chebyshev polynomials of the window mapped to `[-1, 1]`.
    Chebyshev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeFit {
    pub degree: usize,
    pub basis: FitBasis,
    pub coefficients: Vec<f64>,
    pub rms_residual: f64,
    pub max_residual: f64,
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub probe: f64,
    pub window: (f64, f64),
    pub samples: usize,
    pub floor: f64,
    pub fits: Vec<DegreeFit>,
    /// `rms(d + 1) / rms(d)` for consecutive degrees.
    pub ratios: Vec<f64>,
    /// `sqrt(rms(d + 2) / rms(d))`, the per-degree rate over two steps.
    pub pair_ratios: Vec<f64>,
    /// Geometric mean of the pair ratios counted in `decay_steps`.
    pub decay_ratio: Option<f64>,
    /// Degrees whose pair ratio is below [`DECAY_RATIO`] (or whose
    /// successor-but-one reaches the floor) before the floor is hit.
    pub decay_steps: usize,
    pub certified: bool,
}

fn design(thetas: &[f64], degree: usize, basis: FitBasis, window: (f64, f64)) -> DMatrix<f64> {
    let (lo, hi) = window;
    DMatrix::from_fn(thetas.len(), degree + 1, |i, j| match basis {
        FitBasis::Monomial => thetas[i].powi(j as i32),
        FitBasis::Chebyshev => {
            let x = (2.0 * thetas[i] - lo - hi) / (hi - lo);
            (j as f64 * x.clamp(-1.0, 1.0).acos()).cos()
        }
    })
}

fn least_squares(a: &DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (max, min) = (sv.max(), sv.min());
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    let c = svd.solve(y, 1e-14 * max).map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))?;
    Ok((c, condition))
}

fn fit_degree(thetas: &[f64], values: &[f64], degree: usize, window: (f64, f64)) -> Result<DegreeFit> {
    let y = DVector::from_column_slice(values);
    let mut basis = if degree <= MAX_MONOMIAL_DEGREE { FitBasis::Monomial } else { FitBasis::Chebyshev };
    let mut a = design(thetas, degree, basis, window);
    let (mut c, mut condition) = least_squares(&a, &y)?;
    if basis == FitBasis::Monomial && condition > MAX_CONDITION {
        basis = FitBasis::Chebyshev;
        a = design(thetas, degree, basis, window);
        (c, condition) = least_squares(&a, &y)?;
    }
    let r = &a * &c - &y;
    let n = values.len() as f64;
    Ok(DegreeFit {
        degree,
        basis,
        coefficients: c.iter().copied().collect(),
        rms_residual: (r.norm_squared() / n).sqrt(),
        max_residual: r.amax(),
        condition,
    })
}

/// Polynomial fits of degree `1..=d_max` to `(θ, value)` samples inside
/// `window`. Certified when, for every degree above the floor, the RMS
/// residual two degrees later is below a quarter of it (per-degree rate
/// below one half) or at the floor, with at least four such degrees unless
/// the floor is reached first.
pub fn fit_samples(thetas: &[f64], values: &[f64], window: (f64, f64), floor: f64, probe: f64) -> Result<FitReport> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!("empty window [{lo}, {hi}]")));
    }
    let (ts, vs): (Vec<f64>, Vec<f64>) =
        thetas.iter().zip(values).filter(|(t, _)| **t >= lo && **t <= hi).map(|(t, v)| (*t, *v)).unzip();
    if ts.len() < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!("{} samples in window, need at least {MIN_SAMPLES}", ts.len())));
    }
    let d_max = MAX_DEGREE.min(ts.len() - 2);
    let fits = (1..=d_max).map(|d| fit_degree(&ts, &vs, d, window)).collect::<Result<Vec<_>>>()?;
    let res: Vec<f64> = fits.iter().map(|f| f.rms_residual).collect();
    let ratios: Vec<f64> = res.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).collect();

    // Two-step geometric rate: fits of nearly even functions improve in
    // pairs of degrees, so single steps can stall while the rate holds.
    let pair_ratios: Vec<f64> = res.windows(3).map(|w| if w[0] > 0.0 { (w[2] / w[0]).sqrt() } else { 0.0 }).collect();
    let mut decay_steps = 0;
    let mut certified = true;
    let mut log_sum = 0.0;
    let mut reached_floor = res.iter().any(|r| *r <= floor);
    for (k, rate) in pair_ratios.iter().enumerate() {
        if res[k] <= floor {
            break;
        }
        if *rate < DECAY_RATIO || res[k + 2] <= floor {
            decay_steps += 1;
            log_sum += rate.max(f64::MIN_POSITIVE).ln();
        } else {
            certified = false;
        }
    }
    if pair_ratios.is_empty() {
        reached_floor = res[0] <= floor;
    }
    let decay_ratio = (decay_steps > 0).then(|| (log_sum / decay_steps as f64).exp());
    certified &= decay_steps >= MIN_DECAY_STEPS || reached_floor;
    Ok(FitReport {
        probe,
        window,
        samples: ts.len(),
        floor,
        fits,
        ratios,
        pair_ratios,
        decay_ratio,
        decay_steps,
        certified,
    })
}

/// [`fit_samples`] on one probe column of a family table, with the table's
/// noise floor.
pub fn analyticity_fit(table: &FamilyTable, probe: usize, window: (f64, f64)) -> Result<FitReport> {
    if probe >= table.probes.len() {
        return Err(Error::InvalidInput(format!("probe index {probe} out of range")));
    }
    let scale = table.column(probe).iter().fold(1.0f64, |m, v| m.max(v.abs()));
    fit_samples(&table.thetas(), &table.column(probe), window, table.noise_floor * scale, table.probes[probe])
}
