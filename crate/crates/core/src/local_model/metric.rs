use num_complex::Complex64;

use super::params::{check_radius, DiskPoint, LocalModelParams, MetricSample};
use crate::error::Result;
use crate::linalg::{c, Mat2};
use crate::special::{sinhc, theta_coth, SERIES_THRESHOLD};

/// Harmonic metric `k_{β,θ}(r) = diag(r^β sinh(θs)/θ, inverse)` with
/// `s = -log r`; at `θ = 0` the cusp limit `diag(r^β s, 1/(r^β s))`.
pub fn eval_cone_metric(p: &LocalModelParams, r: f64) -> Result<MetricSample> {
    check_radius(r)?;
    let s = -r.ln();
    let h11 = r.powf(p.beta()) * sinhc(p.theta(), s);
    Ok(MetricSample::diag(h11, 1.0 / h11))
}

/// Simpson's cusp metric `diag(-log r, -1/log r)`.
pub fn eval_cusp_metric(r: f64) -> Result<MetricSample> {
    check_radius(r)?;
    let s = -r.ln();
    Ok(MetricSample::diag(s, 1.0 / s))
}

/// Coefficient `c(r) = θ² / sinh²(θ log r)` of the adjoint Higgs field,
/// `φ* = c(r) [[0, 1/2], [0, 0]] z̄^{-1} dz̄` (times `z^{-β}` in the twisted
/// gauge). The `θ = 0` value is the limit `1 / log² r`.
pub fn eval_higgs_adjoint(p: &LocalModelParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let q = sinhc(p.theta(), r.ln());
    Ok(1.0 / (q * q))
}

/// Diagonal coefficient `a(r)` of the Chern connection,
/// `∂_θ = ∂ + a(r) diag(1, -1) z^{-1} dz`, with
/// `a(r) = θ coth(θ log r) / 2 + β / 2`.
pub fn eval_chern_connection(p: &LocalModelParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(0.5 * theta_coth(p.theta(), r.ln()) + 0.5 * p.beta())
}

/// Curvature coefficient `f(r)` with `F = f(r) diag(1, -1) dz̄ ∧ dz`,
/// `f(r) = -θ² / (4 r² sinh²(θ log r))`.
///
/// Evaluated through `(r^{-θ} - r^{θ}) / 2θ` (via `expm1`) so that it is an
/// independent route from [`eval_higgs_adjoint`].
pub fn eval_curvature(p: &LocalModelParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let theta = p.theta();
    let s = -r.ln();
    let q = if (theta * s).abs() < SERIES_THRESHOLD {
        sinhc(theta, s)
    } else {
        let y = theta * s;
        (y.exp_m1() - (-y).exp_m1()) / (2.0 * theta)
    };
    Ok(-1.0 / (4.0 * r * r * q * q))
}

/// Connection matrices of `D = d + A_z dz + A_z̄ dz̄`, normalised as
/// `dz_part = z A_z` and `dzbar_part = z̄ A_z̄` so that both stay bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionMatrices {
    pub dz_part: Mat2,
    pub dzbar_part: Mat2,
}

/// Full flat connection `D_θ = ∂̄ + ∂_θ + φ + φ*` at `z`.
pub fn connection_matrices(p: &LocalModelParams, z: &DiskPoint) -> Result<ConnectionMatrices> {
    let a = eval_chern_connection(p, z.r)?;
    let coeff = eval_higgs_adjoint(p, z.r)?;
    let zero = c(0.0, 0.0);
    let dz_part = Mat2::new(c(a, 0.0), zero, z.pow(p.beta()) * 0.5, c(-a, 0.0));
    let dzbar_part = Mat2::new(zero, z.pow(-p.beta()) * (0.5 * coeff), zero, zero);
    Ok(ConnectionMatrices { dz_part, dzbar_part })
}

/// Simpson's explicit cusp connection `D_0`, written out entrywise:
/// `D_0 = d + [[1/(2 log r), 0], [1/2, -1/(2 log r)]] z^{-1}dz
///          + [[0, 1/(2 log² r)], [0, 0]] z̄^{-1}dz̄`.
pub fn simpson_cusp_connection(z: &DiskPoint) -> Result<ConnectionMatrices> {
    check_radius(z.r)?;
    let l = z.r.ln();
    let zero = c(0.0, 0.0);
    Ok(ConnectionMatrices {
        dz_part: Mat2::new(c(0.5 / l, 0.0), zero, c(0.5, 0.0), c(-0.5 / l, 0.0)),
        dzbar_part: Mat2::new(zero, c(0.5 / (l * l), 0.0), zero, zero),
    })
}

/// The `z`- and `z̄`-components of `Dσ` for a section with components
/// `sigma` and logarithmic-polar derivatives `r ∂_r σ`, `∂_γ σ`, both scaled
/// by `z` (resp. `z̄`).
pub(crate) fn apply_connection(
    conn: &ConnectionMatrices,
    sigma: &[Complex64; 2],
    r_dr: &[Complex64; 2],
    d_gamma: &[Complex64; 2],
) -> ([Complex64; 2], [Complex64; 2]) {
    let i = c(0.0, 1.0);
    let mut dz = [c(0.0, 0.0); 2];
    let mut dzbar = [c(0.0, 0.0); 2];
    for row in 0..2 {
        dz[row] = 0.5 * (r_dr[row] - i * d_gamma[row])
            + conn.dz_part[(row, 0)] * sigma[0]
            + conn.dz_part[(row, 1)] * sigma[1];
        dzbar[row] = 0.5 * (r_dr[row] + i * d_gamma[row])
            + conn.dzbar_part[(row, 0)] * sigma[0]
            + conn.dzbar_part[(row, 1)] * sigma[1];
    }
    (dz, dzbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn params(theta: f64, beta: f64) -> LocalModelParams {
        LocalModelParams::new(theta, beta).unwrap()
    }

    #[test]
    fn cusp_metric_at_inverse_e_is_identity() {
        let r = (-1.0f64).exp();
        let h = eval_cone_metric(&params(0.0, 0.0), r).unwrap();
        assert!((h.a - 1.0).abs() < 1e-15 && (h.d - 1.0).abs() < 1e-15);
        let k = eval_cusp_metric(r).unwrap();
        assert!((k.a - 1.0).abs() < 1e-15 && (k.d - 1.0).abs() < 1e-15);
        let k2 = eval_cusp_metric((-2.0f64).exp()).unwrap();
        assert!((k2.a - 2.0).abs() < 1e-15 && (k2.d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cone_metric_examples() {
        let r = (-1.0f64).exp();
        let h = eval_cone_metric(&params(0.5, 0.0), r).unwrap();
        // (1/2θ)(e^{θ} - e^{-θ}) with θ = 1/2 is 2 sinh(1/2).
        assert!((h.a - 2.0 * 0.5f64.sinh()).abs() < 1e-14);
        assert!((h.a - 1.042_190_610_987_494_8).abs() < 1e-14);
        assert!((h.d - 1.0 / (2.0 * 0.5f64.sinh())).abs() < 1e-14);

        let h = eval_cone_metric(&params(0.3, 1.0), 0.25).unwrap();
        let expected = (0.25 / 0.6) * (0.25f64.powf(-0.3) - 0.25f64.powf(0.3));
        assert!((h.a - expected).abs() < 1e-14);
        assert!((h.det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cusp_matches_cone_at_zero() {
        for r in [1e-6, 0.01, 0.2, 0.7, 0.99] {
            let a = eval_cusp_metric(r).unwrap();
            let b = eval_cone_metric(&params(0.0, 0.0), r).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn domain_errors() {
        let p = params(0.5, 0.0);
        for r in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(eval_cone_metric(&p, r), Err(Error::Domain(_))));
            assert!(eval_cusp_metric(r).is_err());
            assert!(eval_higgs_adjoint(&p, r).is_err());
            assert!(eval_chern_connection(&p, r).is_err());
            assert!(eval_curvature(&p, r).is_err());
        }
        assert!(LocalModelParams::new(1.0, 0.0).is_err());
        assert!(LocalModelParams::new(-0.01, 0.0).is_err());
    }

    #[test]
    fn adjoint_connection_curvature_examples() {
        let r1 = (-1.0f64).exp();
        let c1 = eval_higgs_adjoint(&params(0.5, 0.0), r1).unwrap();
        assert!((c1 - 0.25 / 0.5f64.sinh().powi(2)).abs() < 1e-14);
        assert!((c1 - 0.9207).abs() < 1e-4);

        let c0 = eval_higgs_adjoint(&params(0.0, 0.0), (-2.0f64).exp()).unwrap();
        assert!((c0 - 0.25).abs() < 1e-15);
        let tiny = eval_higgs_adjoint(&params(0.9, 0.0), 1e-200).unwrap();
        assert!(tiny < 1e-100);

        let a = eval_chern_connection(&params(0.5, 0.0), r1).unwrap();
        assert!((a - 0.25 / (-0.5f64).tanh()).abs() < 1e-14);
        assert!((a + 0.54099).abs() < 1e-5);
        let a0 = eval_chern_connection(&params(0.0, 0.0), r1).unwrap();
        assert!((a0 + 0.5).abs() < 1e-15);

        let f = eval_curvature(&params(0.5, 0.0), r1).unwrap();
        let expected = -0.25 * r1.powi(-2) / (4.0 * 0.5f64.sinh().powi(2));
        assert!((f - expected).abs() < 1e-12);
        assert!((f + 1.70073).abs() < 1e-5);
    }

    #[test]
    fn connection_is_negative_for_untwisted_model() {
        for theta in [0.0, 0.1, 0.5, 0.99] {
            for r in [1e-9, 0.1, 0.5, 0.9] {
                assert!(eval_chern_connection(&params(theta, 0.0), r).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn curvature_cancels_bracket_pointwise() {
        for theta in [0.0, 0.25, 0.5, 0.75] {
            for beta in [0.0, 1.0] {
                let p = params(theta, beta);
                for k in 1..50 {
                    let r = 0.02 * k as f64 - 0.01;
                    let f = eval_curvature(&p, r).unwrap();
                    let cc = eval_higgs_adjoint(&p, r).unwrap();
                    let scaled = (4.0 * r * r * f + cc).abs();
                    assert!(scaled <= 1e-12 * cc.max(1.0), "theta {theta} r {r}: {scaled}");
                }
            }
        }
    }

    #[test]
    fn curvature_is_acceptable_on_half_disk() {
        for k in 0..10 {
            let theta = 0.1 * k as f64;
            for j in 1..200 {
                let r = 0.5 * (j as f64 / 200.0).powi(4);
                let f = eval_curvature(&params(theta, 0.0), r).unwrap();
                let bound = 1.0 / (r * r * r.ln().powi(2));
                assert!(4.0 * f.abs() <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn simpson_connection_equals_theta_zero_connection() {
        let p = params(0.0, 0.0);
        for (r, g) in [(0.1, 0.3), (0.5, -2.0), (0.9, 3.0)] {
            let z = DiskPoint::new(r, g).unwrap();
            let a = connection_matrices(&p, &z).unwrap();
            let b = simpson_cusp_connection(&z).unwrap();
            assert!((a.dz_part - b.dz_part).norm() < 1e-14);
            assert!((a.dzbar_part - b.dzbar_part).norm() < 1e-14);
        }
    }
}
