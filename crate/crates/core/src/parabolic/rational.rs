use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_SNAP_DENOMINATOR: i64 = 1_000_000;

/// Record of a float replaced by a nearby rational.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapReport {
    pub input: f64,
    pub numerator: i64,
    pub denominator: i64,
    /// `input - numerator / denominator`.
    pub error: f64,
}

/// Best rational approximation of `x` with denominator at most
/// [`MAX_SNAP_DENOMINATOR`], by continued-fraction convergents and the
/// final semiconvergent.
pub fn snap_to_rational(x: f64) -> Result<(BigRational, SnapReport)> {
    if !x.is_finite() || x.abs() > 1e12 {
        return Err(Error::InvalidInput(format!("cannot snap {x} to a rational")));
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut rest = x;
    loop {
        let a = rest.floor();
        let ai = a as i64;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > MAX_SNAP_DENOMINATOR {
            // Largest admissible semiconvergent between the last two convergents.
            let k = (MAX_SNAP_DENOMINATOR - q0) / q1;
            let (ps, qs) = (k * p1 + p0, k * q1 + q0);
            if (x - ps as f64 / qs as f64).abs() < (x - p1 as f64 / q1 as f64).abs() {
                (p1, q1) = (ps, qs);
            }
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a;
        if frac.abs() < 1e-15 || (x - p1 as f64 / q1 as f64) == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    let value = BigRational::new(BigInt::from(p1), BigInt::from(q1));
    Ok((value, SnapReport { input: x, numerator: p1, denominator: q1, error: x - p1 as f64 / q1 as f64 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::q;

    #[test]
    fn snaps_short_decimals_exactly() {
        assert_eq!(snap_to_rational(0.5).unwrap().0, q(1, 2));
        assert_eq!(snap_to_rational(0.3).unwrap().0, q(3, 10));
        assert_eq!(snap_to_rational(0.125).unwrap().0, q(1, 8));
        assert_eq!(snap_to_rational(0.0).unwrap().0, q(0, 1));
        assert_eq!(snap_to_rational(1.0 / 3.0).unwrap().0, q(1, 3));
    }

    #[test]
    fn irrational_snap_respects_denominator_bound() {
        let (v, rep) = snap_to_rational(std::f64::consts::PI - 3.0).unwrap();
        assert!(rep.denominator <= MAX_SNAP_DENOMINATOR);
        assert!(rep.error.abs() < 1e-11);
        assert_eq!(v, q(rep.numerator, rep.denominator));
        assert!(snap_to_rational(f64::NAN).is_err());
    }
}
