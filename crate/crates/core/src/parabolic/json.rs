use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{FilteredBundleSpec, PointWeights, SubobjectSpec, WeightSystem};
use crate::error::{Error, Result};

/// Weights at one point as `[numerator, denominator, multiplicity]` triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub weights: Vec<[i64; 3]>,
}

/// Wire form of a filtered bundle or subobject. `rank` and `deg_E0` carry
/// the rank and the degree of the `α = 0` extension in both cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    #[serde(default)]
    pub genus: u32,
    pub rank: u32,
    #[serde(rename = "deg_E0")]
    pub deg_e0: i64,
    #[serde(default)]
    pub points: Vec<PointJson>,
}

fn weights_from_json(points: &[PointJson]) -> Result<WeightSystem> {
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let mut entries = Vec::with_capacity(p.weights.len());
        for &[num, den, mult] in &p.weights {
            if den <= 0 {
                return Err(Error::InvalidInput(format!("weight denominator {den} must be positive")));
            }
            let mult = u32::try_from(mult).map_err(|_| Error::InvalidInput(format!("bad multiplicity {mult}")))?;
            entries.push((BigRational::new(BigInt::from(num), BigInt::from(den)), mult));
        }
        out.push(PointWeights::new(entries)?);
    }
    Ok(WeightSystem { points: out })
}

fn weights_to_json(w: &WeightSystem) -> Result<Vec<PointJson>> {
    let small = |x: &BigInt| x.to_i64().ok_or_else(|| Error::InvalidInput(format!("{x} does not fit in 64 bits")));
    w.points
        .iter()
        .map(|p| {
            let weights = p
                .entries()
                .iter()
                .map(|(q, m)| Ok([small(q.numer())?, small(q.denom())?, i64::from(*m)]))
                .collect::<Result<Vec<_>>>()?;
            Ok(PointJson { weights })
        })
        .collect()
}

impl TryFrom<&BundleJson> for FilteredBundleSpec {
    type Error = Error;

    fn try_from(j: &BundleJson) -> Result<Self> {
        FilteredBundleSpec::new(j.genus, j.rank, j.deg_e0, weights_from_json(&j.points)?)
    }
}

impl TryFrom<&BundleJson> for SubobjectSpec {
    type Error = Error;

    fn try_from(j: &BundleJson) -> Result<Self> {
        SubobjectSpec::new(j.rank, j.deg_e0, weights_from_json(&j.points)?)
    }
}

impl BundleJson {
    pub fn from_bundle(b: &FilteredBundleSpec) -> Result<Self> {
        Ok(Self { genus: b.genus, rank: b.rank, deg_e0: b.deg_e0, points: weights_to_json(&b.weights)? })
    }

    pub fn from_subobject(genus: u32, s: &SubobjectSpec) -> Result<Self> {
        Ok(Self { genus, rank: s.rank, deg_e0: s.deg_f0, points: weights_to_json(&s.weights)? })
    }
}
