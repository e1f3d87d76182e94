use proptest::prelude::*;
use steplab::norms::{stepanov_norm, window_integral, Interval};
use steplab::operators::{
    dyadic_partial_sum, hilbert, hilbert_identity_check, hilbert_pm, littlewood_paley_pieces,
    DyadicLevel, SignConvention, SignVariant,
};
use steplab::{
    AveragingWindow, Complex64, Mollifier, NormExponent, TrigPolynomial, TrigPolynomial32,
};

type P = TrigPolynomial<f64>;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn poly(max_terms: usize, span: f64) -> impl Strategy<Value = P> {
    prop::collection::vec((-span..span, coeff()), 0..=max_terms).prop_map(P::from_terms)
}

/// Conjugate-symmetric polynomial, optionally with a constant term.
fn real_poly(max_pairs: usize, span: f64) -> impl Strategy<Value = P> {
    (
        prop::collection::vec((0.05..span, coeff()), 0..=max_pairs),
        prop::option::of(-2.0..2.0f64),
    )
        .prop_map(|(pairs, c0)| {
            let mut terms = Vec::new();
            if let Some(c) = c0 {
                terms.push((0.0, Complex64::new(c, 0.0)));
            }
            for (l, c) in pairs {
                terms.push((l, c));
                terms.push((-l, c.conj()));
            }
            P::from_terms(terms)
        })
}

fn close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-12 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn evaluation_is_linear(f in poly(8, 30.0), g in poly(8, 30.0), x in -50.0..50.0f64) {
        let s = f.coefficient_l1() + g.coefficient_l1();
        prop_assert!(close((&f + &g).evaluate(x), f.evaluate(x) + g.evaluate(x), s));
        prop_assert!(close((&f - &g).evaluate(x), f.evaluate(x) - g.evaluate(x), s));
    }

    #[test]
    fn product_law(f in poly(6, 20.0), g in poly(6, 20.0), x in -20.0..20.0f64) {
        let s = f.coefficient_l1() * g.coefficient_l1();
        prop_assert!(close((&f * &g).evaluate(x), f.evaluate(x) * g.evaluate(x), 8.0 * s));
    }

    #[test]
    fn modulation_law(f in poly(8, 30.0), mu in -10.0..10.0f64, x in -20.0..20.0f64) {
        let lhs = f.modulate(mu).evaluate(x);
        let rhs = Complex64::from_polar(1.0, mu * x) * f.evaluate(x);
        prop_assert!(close(lhs, rhs, 64.0 * f.coefficient_l1()));
    }

    #[test]
    fn conjugation(f in poly(8, 30.0), x in -20.0..20.0f64) {
        prop_assert!(close(f.conj().evaluate(x), f.evaluate(x).conj(), f.coefficient_l1()));
    }

    #[test]
    fn json_round_trip(f in poly(10, 100.0)) {
        let text = serde_json::to_string(&f).unwrap();
        let back: P = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn coefficient_estimate_is_certified(
        f in poly(10, 30.0),
        pick in any::<prop::sample::Index>(),
        off in -30.0..30.0f64,
        t in 0.5..500.0f64,
        use_term in any::<bool>(),
    ) {
        let lambda = if use_term && !f.is_empty() {
            f.terms()[pick.index(f.len())].freq
        } else {
            off
        };
        let est = f.fourier_coefficient_estimate(lambda, AveragingWindow::new(t).unwrap());
        let exact = f.fourier_coefficient_exact(lambda).unwrap();
        let slack = 16.0 * f64::EPSILON * f.coefficient_l1();
        prop_assert!((est.value - exact).norm() <= est.error_bound + slack);
    }

    #[test]
    fn cutoff_pair(xi in -4.0..4.0f64) {
        let m = Mollifier::<f64>::new();
        prop_assert!((m.psi_hat(xi) - (m.phi_hat(xi / 2.0) - m.phi_hat(xi))).abs() <= 1e-15);
        if xi.abs() <= 1.0 {
            prop_assert!((1.0 - m.phi_hat(xi) - m.psi_hat(xi)).abs() <= 1e-15);
        }
        prop_assert!((0.0..=1.0).contains(&m.phi_hat(xi)));
    }

    #[test]
    fn telescoping(lam in -5000.0..5000.0f64, k in 1..20i32) {
        let m = Mollifier::<f64>::new();
        let sum: f64 = (0..k).map(|j| m.psi_hat_scaled(j, lam)).sum();
        prop_assert!((sum - (m.phi_hat_scaled(k, lam) - m.phi_hat(lam))).abs() <= 1e-14);
    }

    #[test]
    fn sign_identity(a in -10.0..10.0f64, b in -10.0..10.0f64, plus in any::<bool>()) {
        prop_assume!(a != 0.0 && b != 0.0 && a + b != 0.0);
        let v = if plus { SignVariant::Plus } else { SignVariant::Minus };
        let s = SignConvention::default();
        let lhs: f64 = 1.0 - (s.sgn(v, a) + s.sgn(v, b)) * s.sgn(v, a + b);
        prop_assert_eq!(lhs, -s.sgn(v, a) * s.sgn(v, b));
    }

    #[test]
    fn hilbert_square_identity(f in real_poly(6, 30.0), plus in any::<bool>()) {
        let v = if plus { SignVariant::Plus } else { SignVariant::Minus };
        let r = hilbert_identity_check(&f, v).unwrap();
        prop_assert!(r <= 1e-10 * f.coefficient_l1().powi(2).max(1.0));
    }

    #[test]
    fn pm_average_is_hilbert(f in poly(8, 10.0)) {
        let avg = (&hilbert_pm(&f, SignVariant::Plus) + &hilbert_pm(&f, SignVariant::Minus))
            .scale(Complex64::new(0.5, 0.0));
        prop_assert_eq!(avg, hilbert(&f));
    }

    #[test]
    fn dyadic_truncations_nest(f in poly(10, 70.0), j in 0..7u32, k in 0..7u32) {
        let a = dyadic_partial_sum(&dyadic_partial_sum(&f, DyadicLevel(j)), DyadicLevel(k));
        prop_assert_eq!(a, dyadic_partial_sum(&f, DyadicLevel(j.min(k))));
    }

    #[test]
    fn lp_pieces_resolve_identity_off_zero(f in poly(8, 200.0)) {
        let m = Mollifier::new();
        let mut sum = P::zero();
        for (_, piece) in littlewood_paley_pieces(&f, &m) {
            sum = &sum + &piece;
        }
        let expected = P::from_terms(f.terms().iter().filter(|t| t.freq != 0.0).map(|t| (t.freq, t.coeff)));
        for (a, b) in sum.terms().iter().zip(expected.terms()) {
            prop_assert!((a.freq - b.freq).abs() == 0.0);
            prop_assert!((a.coeff - b.coeff).norm() <= 1e-14 * b.coeff.norm().max(1.0));
        }
    }

    #[test]
    fn window_integral_is_nonnegative_and_bounded(f in poly(6, 20.0), x in -50.0..50.0f64) {
        let two = NormExponent::new(2.0).unwrap();
        let v = window_integral(&f, two, x).unwrap();
        prop_assert!(v >= -1e-12 * f.coefficient_l1().powi(2));
        prop_assert!(v <= f.coefficient_l1().powi(2) * (1.0 + 1e-12));
    }

    #[test]
    fn f32_tracks_f64(f in poly(6, 10.0), x in -5.0..5.0f64) {
        let g = TrigPolynomial32::from_terms(f.terms().iter().map(|t| {
            (t.freq as f32, num_complex::Complex::new(t.coeff.re as f32, t.coeff.im as f32))
        }));
        let a = f.evaluate(x);
        let b = g.evaluate(x as f32);
        let err = ((b.re as f64 - a.re).powi(2) + (b.im as f64 - a.im).powi(2)).sqrt();
        prop_assert!(err <= 1e-4 * f.coefficient_l1().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stepanov_norm_is_homogeneous_and_nested(f in poly(5, 10.0), c in 0.1..5.0f64) {
        prop_assume!(!f.is_empty());
        let w = Interval::new(0.0, 8.0).unwrap();
        let h = 1.0 / 16.0;
        let one = stepanov_norm(&f, NormExponent::new(1.0).unwrap(), w, h).unwrap();
        let two = stepanov_norm(&f, NormExponent::new(2.0).unwrap(), w, h).unwrap();
        prop_assert!(one.lower() <= two.upper());
        let scaled = stepanov_norm(&f.scale(Complex64::new(c, 0.0)), NormExponent::new(2.0).unwrap(), w, h).unwrap();
        prop_assert!((scaled.value - c * two.value).abs() <= scaled.error_radius + c * two.error_radius + 1e-12);
    }
}
