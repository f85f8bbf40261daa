//! Filtered (parabolic) bundles over a marked curve in exact rational
//! arithmetic: weights, algebraic degree, slope and slope stability.

mod json;
mod mcowen;
mod rational;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use json::{BundleJson, PointJson};
pub use mcowen::{local_weight_set, mcowen_bundle, mcowen_stable, ConeAngles, DivisorSteps, McOwenBundle, TwistParity};
pub use rational::{snap_to_rational, SnapReport, MAX_SNAP_DENOMINATOR};

/// Weights at one marked point: strictly increasing values in `[0, 1)`, each
/// with a positive multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointWeights {
    entries: Vec<(BigRational, u32)>,
}

impl PointWeights {
    pub fn new(mut entries: Vec<(BigRational, u32)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidInput(format!("repeated weight {}", pair[0].0)));
            }
        }
        for (w, mult) in &entries {
            if *w < BigRational::zero() || *w >= BigRational::one() {
                return Err(Error::InvalidInput(format!("weight {w} outside [0, 1)")));
            }
            if *mult == 0 {
                return Err(Error::InvalidInput(format!("weight {w} has multiplicity 0")));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(BigRational, u32)] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.entries.iter().map(|e| e.1).sum()
    }

    fn weighted_sum(&self) -> BigRational {
        self.entries
            .iter()
            .map(|(w, m)| w * BigRational::from_integer(BigInt::from(*m)))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    fn multiplicity_of(&self, w: &BigRational) -> u32 {
        self.entries.iter().find(|e| &e.0 == w).map_or(0, |e| e.1)
    }

    fn merged(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        for (w, m) in &other.entries {
            match entries.iter_mut().find(|e| &e.0 == w) {
                Some(e) => e.1 += m,
                None => entries.push((w.clone(), *m)),
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Self { entries }
    }
}

/// Per-point weight data for all marked points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightSystem {
    pub points: Vec<PointWeights>,
}

impl WeightSystem {
    pub fn marked_points(&self) -> usize {
        self.points.len()
    }

    fn check_rank(&self, rank: u32) -> Result<()> {
        for (j, p) in self.points.iter().enumerate() {
            if p.total_multiplicity() != rank {
                return Err(Error::InvalidInput(format!(
                    "multiplicities at point {j} sum to {}, rank is {rank}",
                    p.total_multiplicity()
                )));
            }
        }
        Ok(())
    }

    fn weighted_sum(&self) -> BigRational {
        self.points.iter().map(PointWeights::weighted_sum).fold(BigRational::zero(), |a, b| a + b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredBundleSpec {
    pub genus: u32,
    pub rank: u32,
    /// Degree of the `α = 0` extension.
    pub deg_e0: i64,
    pub weights: WeightSystem,
}

impl FilteredBundleSpec {
    pub fn new(genus: u32, rank: u32, deg_e0: i64, weights: WeightSystem) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be at least 1".into()));
        }
        weights.check_rank(rank)?;
        Ok(Self { genus, rank, deg_e0, weights })
    }

    pub fn marked_points(&self) -> usize {
        self.weights.marked_points()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubobjectSpec {
    pub rank: u32,
    pub deg_f0: i64,
    pub weights: WeightSystem,
}

impl SubobjectSpec {
    pub fn new(rank: u32, deg_f0: i64, weights: WeightSystem) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput("subobject rank must be at least 1".into()));
        }
        weights.check_rank(rank)?;
        Ok(Self { rank, deg_f0, weights })
    }

    fn check_inside(&self, parent: &FilteredBundleSpec) -> Result<()> {
        if self.rank >= parent.rank {
            return Err(Error::InvalidInput(format!("subobject rank {} not below {}", self.rank, parent.rank)));
        }
        if self.weights.marked_points() != parent.marked_points() {
            return Err(Error::InvalidInput("subobject and bundle have different marked points".into()));
        }
        for (j, (sub, full)) in self.weights.points.iter().zip(&parent.weights.points).enumerate() {
            for (w, m) in sub.entries() {
                if *m > full.multiplicity_of(w) {
                    return Err(Error::InvalidInput(format!(
                        "subobject weight {w} at point {j} exceeds the parent multiplicity"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Objects with a rank and an algebraic degree.
pub trait Parabolic {
    fn rank(&self) -> u32;
    fn algebraic_degree(&self) -> BigRational;

    fn slope(&self) -> BigRational {
        self.algebraic_degree() / BigRational::from_integer(BigInt::from(self.rank()))
    }
}

impl Parabolic for FilteredBundleSpec {
    fn rank(&self) -> u32 {
        self.rank
    }

    fn algebraic_degree(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.deg_e0)) + self.weights.weighted_sum()
    }
}

impl Parabolic for SubobjectSpec {
    fn rank(&self) -> u32 {
        self.rank
    }

    fn algebraic_degree(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.deg_f0)) + self.weights.weighted_sum()
    }
}

pub fn algebraic_degree<P: Parabolic>(b: &P) -> BigRational {
    b.algebraic_degree()
}

pub fn slope<P: Parabolic>(b: &P) -> BigRational {
    b.slope()
}

/// Direct sum of two filtered bundles on the same marked curve.
pub fn direct_sum(a: &FilteredBundleSpec, b: &FilteredBundleSpec) -> Result<FilteredBundleSpec> {
    if a.genus != b.genus || a.marked_points() != b.marked_points() {
        return Err(Error::InvalidInput("summands live on different marked curves".into()));
    }
    let points = a.weights.points.iter().zip(&b.weights.points).map(|(x, y)| x.merged(y)).collect();
    FilteredBundleSpec::new(a.genus, a.rank + b.rank, a.deg_e0 + b.deg_e0, WeightSystem { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    SemistableOnly,
    Unstable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub verdict: Stability,
    /// Index into the candidate list of the first destabilising (or
    /// slope-equal, for `SemistableOnly`) subobject.
    pub witness: Option<usize>,
    pub bundle_slope: BigRational,
    pub sub_slopes: Vec<BigRational>,
    /// No candidates were supplied, so `Stable` holds vacuously.
    pub vacuous: bool,
    /// The candidates were not checked for invariance under the Higgs field;
    /// the verdict is only as good as the caller's list.
    pub phi_invariance_unverified: bool,
}

/// Compare the slope of `b` with every candidate subobject.
pub fn is_stable(b: &FilteredBundleSpec, subs: &[SubobjectSpec]) -> Result<StabilityReport> {
    for s in subs {
        s.check_inside(b)?;
    }
    let bundle_slope = b.slope();
    let sub_slopes: Vec<BigRational> = subs.iter().map(Parabolic::slope).collect();
    let above = sub_slopes.iter().position(|s| *s > bundle_slope);
    let equal = sub_slopes.iter().position(|s| *s == bundle_slope);
    let (verdict, witness) = match (above, equal) {
        (Some(i), _) => (Stability::Unstable, Some(i)),
        (None, Some(i)) => (Stability::SemistableOnly, Some(i)),
        (None, None) => (Stability::Stable, None),
    };
    Ok(StabilityReport {
        verdict,
        witness,
        bundle_slope,
        sub_slopes,
        vacuous: subs.is_empty(),
        phi_invariance_unverified: true,
    })
}

#[cfg(test)]
pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(deg: i64, weights: &[BigRational]) -> FilteredBundleSpec {
        let points = weights.iter().map(|w| PointWeights::new(vec![(w.clone(), 1)]).unwrap()).collect();
        FilteredBundleSpec::new(0, 1, deg, WeightSystem { points }).unwrap()
    }

    #[test]
    fn degree_and_slope_examples() {
        let b = FilteredBundleSpec::new(3, 2, 5, WeightSystem::default()).unwrap();
        assert_eq!(b.algebraic_degree(), q(5, 1));
        let l = FilteredBundleSpec::new(1, 1, 3, WeightSystem::default()).unwrap();
        assert_eq!(slope(&l), q(3, 1));

        let theta = q(2, 7);
        let half = q(1, 2);
        let point = PointWeights::new(vec![(&half * &theta, 1), (q(1, 1) - &half * &theta, 1)]).unwrap();
        let b = FilteredBundleSpec::new(0, 2, -1, WeightSystem { points: vec![point] }).unwrap();
        assert_eq!(algebraic_degree(&b), q(0, 1));
    }

    #[test]
    fn invalid_weights_rejected() {
        assert!(PointWeights::new(vec![(q(1, 1), 1)]).is_err());
        assert!(PointWeights::new(vec![(q(-1, 3), 1)]).is_err());
        assert!(PointWeights::new(vec![(q(1, 3), 1), (q(1, 3), 1)]).is_err());
        assert!(PointWeights::new(vec![(q(1, 3), 0)]).is_err());
        let p = PointWeights::new(vec![(q(1, 3), 1)]).unwrap();
        assert!(FilteredBundleSpec::new(0, 2, 0, WeightSystem { points: vec![p] }).is_err());
    }

    #[test]
    fn stability_verdicts() {
        let a = line(0, &[q(1, 4)]);
        let b = line(0, &[q(3, 4)]);
        let sum = direct_sum(&a, &b).unwrap();
        assert_eq!(sum.algebraic_degree(), a.algebraic_degree() + b.algebraic_degree());

        let sub = |deg: i64, w: BigRational| {
            SubobjectSpec::new(1, deg, WeightSystem { points: vec![PointWeights::new(vec![(w, 1)]).unwrap()] }).unwrap()
        };
        // Bundle slope is 1/2.
        let rep = is_stable(&sum, &[sub(0, q(1, 4))]).unwrap();
        assert_eq!(rep.verdict, Stability::Stable);
        let rep = is_stable(&sum, &[sub(0, q(1, 4)), sub(0, q(3, 4))]).unwrap();
        assert_eq!((rep.verdict, rep.witness), (Stability::Unstable, Some(1)));

        let even = direct_sum(&line(0, &[q(1, 2)]), &line(0, &[q(1, 2)])).unwrap();
        let rep = is_stable(&even, &[sub(0, q(1, 2))]).unwrap();
        assert_eq!((rep.verdict, rep.witness), (Stability::SemistableOnly, Some(0)));

        let rep = is_stable(&even, &[]).unwrap();
        assert!(rep.vacuous && rep.verdict == Stability::Stable);
        assert!(rep.phi_invariance_unverified);

        assert!(is_stable(&even, &[sub(0, q(1, 3))]).is_err());
    }
}
