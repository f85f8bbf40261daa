use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use higgs_harmonic::analyticity::{solve_family, FamilyConfig, FamilyMode, DEFAULT_PROBES};
use higgs_harmonic::he_solver::{closed_form_w, solve_radial_from, SGrid, SolverConfig};
use higgs_harmonic::linalg::{c, symmetric_space_distance, Hermitian2, Mat2};
use higgs_harmonic::local_model::{
    eval_cone_metric, eval_curvature, eval_higgs_adjoint, monodromy, FrameBasis, LocalModelParams,
};
use higgs_harmonic::parabolic::{
    algebraic_degree, direct_sum, is_stable, local_weight_set, mcowen_bundle, mcowen_stable, snap_to_rational,
    ConeAngles, FilteredBundleSpec, PointWeights, Stability, TwistParity, WeightSystem,
};
use higgs_harmonic::weighted_norms::{weighted_lp_norm, CylinderGrid, SampledSection};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn metric() -> impl Strategy<Value = Hermitian2> {
    (0.1f64..10.0, -3.0f64..3.0, -3.0f64..3.0, 0.1f64..10.0).prop_map(|(a, re, im, d)| {
        // Keep a margin away from the indefinite boundary.
        let b = Complex64::new(re, im);
        let scale = (0.9 * (a * d).sqrt() / b.norm().max(1e-12)).min(1.0);
        Hermitian2::new(a, b * scale, d)
    })
}

fn invertible() -> impl Strategy<Value = Mat2> {
    prop::array::uniform8(-2.0f64..2.0)
        .prop_map(|v| Mat2::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])))
        .prop_filter("well conditioned", |g| g.determinant().norm() > 0.1)
}

fn cone_angles(max_points: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((0i64..60).prop_map(|n| q(n, 60)), 1..=max_points)
}

fn line_bundle(genus: u32, points: usize) -> impl Strategy<Value = FilteredBundleSpec> {
    (-6i64..6, prop::collection::vec(0i64..12, points)).prop_map(move |(deg, ws)| {
        let points = ws.into_iter().map(|n| PointWeights::new(vec![(q(n, 12), 1)]).unwrap()).collect();
        FilteredBundleSpec::new(genus, 1, deg, WeightSystem { points }).unwrap()
    })
}

fn section(grid: &CylinderGrid, coeffs: [f64; 3]) -> SampledSection {
    SampledSection::scalar(grid, move |t, a| {
        Complex64::new(coeffs[0] * (-0.5 * t).exp() + coeffs[1] * a.cos(), coeffs[2] * (t * a).sin())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_satisfy_he(theta in 0.0f64..0.999, beta in prop::sample::select(vec![0.0, 1.0]), logr in -13.8f64..-0.7) {
        let p = LocalModelParams::new(theta, beta).unwrap();
        let r = logr.exp();
        let balance = 4.0 * r * r * eval_curvature(&p, r).unwrap() + eval_higgs_adjoint(&p, r).unwrap();
        prop_assert!(balance.abs() <= 1e-12);
        let h = eval_cone_metric(&p, r).unwrap();
        prop_assert!(h.is_positive_definite());
        prop_assert!((h.a * h.d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monodromy_is_unimodular(theta in 1e-6f64..0.999) {
        let p = LocalModelParams::new(theta, 0.0).unwrap();
        for basis in [FrameBasis::SFrame, FrameBasis::UFrame] {
            let m = monodromy(&p, basis).unwrap();
            prop_assert!((m.det() - 1.0).norm() < 1e-12);
            prop_assert!((m.trace() - 2.0 * (std::f64::consts::PI * theta).cos()).norm() < 1e-12);
        }
    }

    #[test]
    fn norm_is_a_norm(a in prop::array::uniform3(-3.0f64..3.0), b in prop::array::uniform3(-3.0f64..3.0), lambda in -5.0f64..5.0, p in 1.5f64..4.0) {
        let g = CylinderGrid::new(0.0, 3.0, 25, 8, 0.25, p).unwrap();
        let fa = section(&g, a);
        let fb = section(&g, b);
        let sum = section(&g, [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
        let scaled = section(&g, [lambda * a[0], lambda * a[1], lambda * a[2]]);
        let (na, nb) = (weighted_lp_norm(&fa, &g).unwrap(), weighted_lp_norm(&fb, &g).unwrap());
        prop_assert!(weighted_lp_norm(&sum, &g).unwrap() <= (na + nb) * (1.0 + 1e-12) + 1e-14);
        prop_assert!((weighted_lp_norm(&scaled, &g).unwrap() - lambda.abs() * na).abs() <= 1e-10 * (1.0 + na));
    }

    #[test]
    fn distance_is_a_congruence_invariant_metric(h in metric(), k in metric(), l in metric(), g in invertible()) {
        let hk = symmetric_space_distance(&h, &k);
        prop_assert!((hk - symmetric_space_distance(&k, &h)).abs() < 1e-9 * (1.0 + hk));
        prop_assert!(symmetric_space_distance(&h, &h) < 1e-7);
        let via = symmetric_space_distance(&h, &l) + symmetric_space_distance(&l, &k);
        prop_assert!(hk <= via + 1e-9);
        let moved = symmetric_space_distance(&h.congruence(&g), &k.congruence(&g));
        prop_assert!((moved - hk).abs() < 1e-7 * (1.0 + hk));
    }

    #[test]
    fn mcowen_constraint_matches_slope_test(genus in 0u32..6, thetas in cone_angles(6)) {
        let angles = ConeAngles::new(thetas).unwrap();
        let b = mcowen_bundle(genus, &angles).unwrap();
        let verdict = is_stable(&b.bundle, std::slice::from_ref(&b.sub)).unwrap().verdict;
        prop_assert_eq!(verdict == Stability::Stable, mcowen_stable(genus, &angles).unwrap());
        prop_assert_eq!(algebraic_degree(&b.bundle), q(0, 1));
    }

    #[test]
    fn mcowen_weights_are_twisted_local_weights(genus in 0u32..4, thetas in cone_angles(5)) {
        let angles = ConeAngles::new(thetas.clone()).unwrap();
        let b = mcowen_bundle(genus, &angles).unwrap();
        for (w, theta) in b.bundle.weights.points.iter().zip(&thetas) {
            prop_assert_eq!(w, &local_weight_set(theta, TwistParity::Twisted).unwrap());
            prop_assert!(w.entries().iter().all(|(a, _)| *a >= q(0, 1) && *a < q(1, 1)));
        }
    }

    #[test]
    fn degree_is_additive((x, y) in (0u32..3, 0usize..4).prop_flat_map(|(g, m)| (line_bundle(g, m), line_bundle(g, m)))) {
        let sum = direct_sum(&x, &y).unwrap();
        prop_assert_eq!(algebraic_degree(&sum), algebraic_degree(&x) + algebraic_degree(&y));
        prop_assert_eq!(sum.rank, 2);
    }

    #[test]
    fn snapping_recovers_small_fractions(n in 0i64..997, d in 1i64..997) {
        prop_assume!(n < d);
        let (r, rep) = snap_to_rational(n as f64 / d as f64).unwrap();
        prop_assert_eq!(r, q(n, d));
        prop_assert!(rep.error < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn newton_residual_history_never_increases(theta in 0.0f64..0.95, amp in -0.5f64..0.5, k in 1usize..4) {
        let grid = SGrid::new(1.0, 8.0, 200).unwrap();
        let guess: Vec<f64> = (0..grid.nodes)
            .map(|i| {
                let s = grid.s(i);
                let bump = (k as f64 * std::f64::consts::PI * (s - 1.0) / 7.0).sin();
                closed_form_w(theta, s) + amp * bump
            })
            .collect();
        let sol = solve_radial_from(theta, &grid, guess, &SolverConfig::default()).unwrap();
        prop_assert!(sol.history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(sol.sup_error < 2e-4);
    }

    #[test]
    fn family_is_continuous(theta in 0.05f64..0.9, eps in 1e-6f64..1e-3) {
        let t = solve_family(&[theta, theta + eps], FamilyMode::ClosedForm, &DEFAULT_PROBES, &FamilyConfig::default()).unwrap();
        for (a, b) in t.rows[0].values.iter().zip(&t.rows[1].values) {
            // |∂θ w| ≤ s²/3 on the probe range.
            prop_assert!((a - b).abs() <= eps * 16.0 / 3.0);
        }
    }
}
