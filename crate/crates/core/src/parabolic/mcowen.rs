use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{snap_to_rational, SnapReport};
use super::{FilteredBundleSpec, PointWeights, SubobjectSpec, WeightSystem};
use crate::error::{Error, Result};

/// Cone parameters `θ_j ∈ [0, 1)` as exact rationals; `θ_j = 0` marks a cusp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeAngles {
    values: Vec<BigRational>,
}

impl ConeAngles {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        for t in &values {
            if *t < BigRational::zero() || *t >= BigRational::one() {
                return Err(Error::InvalidInput(format!("cone parameter {t} outside [0, 1)")));
            }
        }
        Ok(Self { values })
    }

    /// Snap each float to a rational (denominator ≤ 10⁶) and validate.
    pub fn from_f64(values: &[f64]) -> Result<(Self, Vec<SnapReport>)> {
        let mut exact = Vec::with_capacity(values.len());
        let mut reports = Vec::with_capacity(values.len());
        for &v in values {
            let (r, rep) = snap_to_rational(v)?;
            exact.push(r);
            reports.push(rep);
        }
        Ok((Self::new(exact)?, reports))
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Whether the local model carries the `z^β` twist with `β = 0` or `β = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwistParity {
    Untwisted,
    Twisted,
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn weights_from_pair(lo: BigRational, hi: BigRational) -> PointWeights {
    let entries = if lo == hi { vec![(lo, 2)] } else { vec![(lo, 1), (hi, 1)] };
    PointWeights::new(entries).expect("weights in [0, 1) by construction")
}

/// Parabolic weights of the local cone model at a puncture.
pub fn local_weight_set(theta: &BigRational, parity: TwistParity) -> Result<PointWeights> {
    if *theta < BigRational::zero() || *theta >= BigRational::one() {
        return Err(Error::InvalidInput(format!("cone parameter {theta} outside [0, 1)")));
    }
    let h = half();
    let (lo, hi) = match parity {
        TwistParity::Untwisted => {
            let lo = &h * theta;
            let hi = BigRational::one() - &lo;
            // θ = 0 gives {0, 1} and 1 reduces to 0.
            if hi == BigRational::one() {
                (lo.clone(), lo)
            } else {
                (lo, hi)
            }
        }
        TwistParity::Twisted => (&h * (BigRational::one() - theta), &h * (BigRational::one() + theta)),
    };
    Ok(weights_from_pair(lo, hi))
}

/// Jump locations of the two divisor step functions at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSteps {
    /// `ε_j(α) = 1` for `α ≥ d1_jump`, else 0.
    pub d1_jump: BigRational,
    /// `ε'_j(α) = 1` for `α ≥ d2_jump`, else 0.
    pub d2_jump: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McOwenBundle {
    pub bundle: FilteredBundleSpec,
    /// The unique filtered Higgs subbundle `K^{-1/2}[-D]`.
    pub sub: SubobjectSpec,
    pub steps: Vec<DivisorSteps>,
}

impl McOwenBundle {
    /// Degree of the divisor `D₁(α)`.
    pub fn d1(&self, alpha: &BigRational) -> usize {
        self.steps.iter().filter(|s| *alpha >= s.d1_jump).count()
    }

    /// Degree of the divisor `D₂(α)`.
    pub fn d2(&self, alpha: &BigRational) -> usize {
        self.steps.iter().filter(|s| *alpha >= s.d2_jump).count()
    }

    /// `deg E_α = (g - 1) - deg D₁(α) + (1 - g - m) - deg D₂(α)`.
    pub fn filtration_degree(&self, alpha: &BigRational) -> i64 {
        self.bundle.deg_e0 - self.d1(alpha) as i64 - self.d2(alpha) as i64
    }
}

/// Rank-2 filtered bundle `K^{1/2} ⊕ K^{-1/2}[-D]` with the weights of the
/// twisted cone model at each of the `m` points.
pub fn mcowen_bundle(genus: u32, angles: &ConeAngles) -> Result<McOwenBundle> {
    let m = angles.len();
    if m == 0 {
        return Err(Error::InvalidInput("at least one marked point required".into()));
    }
    let m_i = m as i64;
    let g_i = genus as i64;
    let h = half();
    let mut points = Vec::with_capacity(m);
    let mut sub_points = Vec::with_capacity(m);
    let mut steps = Vec::with_capacity(m);
    for theta in angles.values() {
        let lo = &h * (BigRational::one() - theta);
        let hi = &h * (BigRational::one() + theta);
        points.push(weights_from_pair(lo.clone(), hi.clone()));
        sub_points.push(PointWeights::new(vec![(hi.clone(), 1)])?);
        steps.push(DivisorSteps { d1_jump: lo, d2_jump: hi });
    }
    let bundle = FilteredBundleSpec::new(genus, 2, -m_i, WeightSystem { points })?;
    let sub = SubobjectSpec::new(1, 1 - g_i - m_i, WeightSystem { points: sub_points })?;
    Ok(McOwenBundle { bundle, sub, steps })
}

/// `2g - 2 + m - Σθ_j > 0`.
pub fn mcowen_stable(genus: u32, angles: &ConeAngles) -> Result<bool> {
    if angles.is_empty() {
        return Err(Error::InvalidInput("at least one marked point required".into()));
    }
    let lhs = BigRational::from_integer(BigInt::from(2 * genus as i64 - 2 + angles.len() as i64)) - angles.sum();
    Ok(lhs > BigRational::zero())
}
