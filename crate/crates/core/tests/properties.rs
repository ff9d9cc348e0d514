//! Randomized invariants across the public API.

use proptest::prelude::*;

use subflow_core::ek_operator::{
    ek_apply_direct, ek_apply_series, ek_series_error_bound, lambda_coeff, lambda_coeff_integral,
    ExpDecay, FnProfile,
};
use subflow_core::fd_solver::{self, l1_weights, FDConfig};
use subflow_core::numerics::{gamma_fn, hyp2f1, integrate_jacobi, reciprocal_gamma};
use subflow_core::selfsim::{profile, similarity_exponents, taylor_coefficients, SeriesSolution};
use subflow_core::{
    BoundaryCondition, EKParams, QuadratureSpec, ReducedOdeCoefficients, SimilarityProblem,
};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn bc() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        Just(BoundaryCondition::Concentration),
        Just(BoundaryCondition::Flux)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence(x in 0.1f64..20.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12, "x={x}: {lhs} vs {rhs}");
    }

    #[test]
    fn reciprocal_times_gamma_is_one(x in -19.9f64..50.0) {
        prop_assume!((x - x.round()).abs() > 1e-3 || x > 0.5);
        let p = reciprocal_gamma(x) * gamma_fn(x).unwrap();
        prop_assert!((p - 1.0).abs() < 1e-12, "x={x}: {p}");
    }

    #[test]
    fn exponent_constraint(alpha in 0.001f64..=1.0, m in 0.1f64..10.0, bc in bc()) {
        let e = similarity_exponents(&SimilarityProblem::new(alpha, m, bc).unwrap());
        prop_assert!((2.0 * e.b - m * e.a - alpha).abs() <= 4.0 * f64::EPSILON * (1.0 + m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jacobi_mass_is_a_beta_function(beta in -0.9f64..3.0, gamma in 0.05f64..2.0) {
        let got = integrate_jacobi(|_| 1.0, beta, gamma, &QuadratureSpec::default()).unwrap();
        let want = gamma_fn(beta + 1.0).unwrap() * gamma_fn(gamma).unwrap() / gamma_fn(beta + gamma + 1.0).unwrap();
        prop_assert!(rel(got, want) < 1e-9);
    }

    #[test]
    fn hypergeometric_logarithm(z in -0.9f64..0.9) {
        prop_assume!(z.abs() > 1e-12);
        let want = -(-z).ln_1p() / z;
        prop_assert!(rel(hyp2f1(1.0, 1.0, 2.0, z).unwrap(), want) < 1e-10);
    }

    #[test]
    fn leading_coefficient_is_b(a in 0.0f64..3.0, b in 0.01f64..2.0, m in 0.1f64..8.0, n in 1usize..16) {
        let c = taylor_coefficients(&ReducedOdeCoefficients { a, b }, m, n).unwrap();
        prop_assert_eq!(c[0], 0.0);
        prop_assert_eq!(c[1], b);
        prop_assert_eq!(c.len(), n + 1);
    }

    #[test]
    fn coefficients_do_not_depend_on_boundary_kind(alpha in 0.3f64..=1.0, m in 0.2f64..6.0) {
        // the same (A, B, m) gives the same series under either condition;
        // only the front differs
        let flux = SeriesSolution::new(SimilarityProblem::new(alpha, m, BoundaryCondition::Flux).unwrap(), 4).unwrap();
        prop_assert_eq!(&flux.coeffs, &taylor_coefficients(&flux.abc, m, 4).unwrap());
        let conc = SimilarityProblem::new(alpha, m, BoundaryCondition::Concentration).unwrap();
        let other = SeriesSolution::from_coefficients(conc, flux.abc, flux.coeffs.clone()).unwrap();
        prop_assert_eq!(&other.coeffs, &flux.coeffs);
        prop_assert!(rel(other.eta_star, 1.0 / (m * flux.y(1.0)).sqrt()) < 1e-14);
    }

    #[test]
    fn profile_strictly_decreasing(alpha in 0.2f64..=1.0, m in 0.3f64..5.0, n in 1usize..=4, bc in bc()) {
        let sol = SeriesSolution::new(SimilarityProblem::new(alpha, m, bc).unwrap(), n).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..=200 {
            let u = profile(&sol, sol.eta_star * i as f64 / 200.0);
            prop_assert!(u >= 0.0);
            prop_assert!(u < prev, "not decreasing at sample {i}");
            prev = u;
        }
    }

    #[test]
    fn l1_weights_telescope(alpha in 0.05f64..=1.0, n in 1usize..400) {
        let w = l1_weights(alpha, n);
        let sum: f64 = w.iter().sum();
        prop_assert!(rel(sum, (n as f64).powf(1.0 - alpha)) < 1e-12);
        prop_assert!(w.windows(2).all(|p| p[1] <= p[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lambda_two_formulas_agree(beta in -0.5f64..3.0, gamma in 0.05f64..1.0, delta in 0.5f64..4.0) {
        let p = EKParams::new(beta, gamma, delta).unwrap();
        let spec = QuadratureSpec::adaptive(1e-13);
        let mut prev = f64::INFINITY;
        for k in 0..=10 {
            let l = lambda_coeff(k, &p).unwrap();
            let li = lambda_coeff_integral(k, &p, &spec).unwrap();
            prop_assert!(rel(l, li) < 1e-9, "k={k}: {l} vs {li}");
            let signed = if k % 2 == 0 { l } else { -l };
            prop_assert!(signed < prev);
            prev = signed;
        }
    }

    #[test]
    fn direct_operator_is_linear(
        beta in -0.5f64..2.0, gamma in 0.1f64..1.5, delta in 0.5f64..3.0,
        ca in -2.0f64..2.0, cb in -2.0f64..2.0, eta in 0.0f64..3.0,
    ) {
        let p = EKParams::new(beta, gamma, delta).unwrap();
        let spec = QuadratureSpec::default();
        let u = FnProfile::new(|s| (-s).exp());
        let v = FnProfile::new(|s| 1.0 / (1.0 + s * s));
        let w = FnProfile::new(move |s| ca * (-s).exp() + cb / (1.0 + s * s));
        let lhs = ek_apply_direct(&w, eta, &p, &spec).unwrap();
        let rhs = ca * ek_apply_direct(&u, eta, &p, &spec).unwrap() + cb * ek_apply_direct(&v, eta, &p, &spec).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn generating_function(beta in -0.5f64..2.0, gamma in 0.1f64..1.0, delta in 0.5f64..3.0) {
        let p = EKParams::new(beta, gamma, delta).unwrap();
        let spec = QuadratureSpec::adaptive(1e-13);
        for eta in [0.5f64, 1.0, 2.0] {
            let mut fact = 1.0;
            let mut sum = 0.0;
            for k in 0..30 {
                if k > 0 {
                    fact *= k as f64;
                }
                sum += lambda_coeff(k, &p).unwrap() * eta.powi(k as i32) / fact;
            }
            let inner = integrate_jacobi(|z| (eta * z.powf(1.0 / delta)).exp(), beta, gamma, &spec).unwrap();
            let want = (-eta).exp() * inner / gamma_fn(gamma).unwrap();
            prop_assert!(rel(sum, want) < 1e-8, "eta={eta}: {sum} vs {want}");
        }
    }

    #[test]
    fn series_error_within_bound(
        beta in -0.5f64..2.0, gamma in 0.05f64..1.0, delta in 0.5f64..3.0,
        n in 1usize..=6, eta in 0.0f64..=2.0,
    ) {
        let p = EKParams::new(beta, gamma, delta).unwrap();
        let direct = ek_apply_direct(&ExpDecay, eta, &p, &QuadratureSpec::adaptive(1e-13)).unwrap();
        let series = ek_apply_series(&ExpDecay, eta, &p, n).unwrap();
        let bound = ek_series_error_bound(1.0, eta, &p, n).unwrap();
        prop_assert!((direct - series).abs() <= bound + 1e-12, "err {} bound {bound}", (direct - series).abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn concentration_runs_stay_monotone_and_bounded(alpha in 0.3f64..=1.0, m in 0.0f64..3.0) {
        let cfg = FDConfig {
            nx: 80,
            dx: 0.0125,
            dt: 1e-3,
            t_end: 0.05,
            alpha,
            m,
            bc: BoundaryCondition::Concentration,
            theta: 1.0,
        };
        let field = fd_solver::run(&cfg).unwrap();
        for level in &field.history {
            prop_assert!(level.iter().all(|&u| (0.0..=1.0).contains(&u)));
            prop_assert!(level.windows(2).all(|w| w[1] <= w[0] + 1e-14));
        }
    }
}
