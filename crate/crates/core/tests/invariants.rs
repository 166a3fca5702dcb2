//! Structural identities, checked on random parameters.

use kbessel::airy::airy;
use kbessel::asymptotics::{evaluate, small_y_envelope};
use kbessel::eisenstein::{fourier_coefficient, EisensteinOptions, FourierData, KernelSource};
use kbessel::oracle::k_series;
use kbessel::ComplexValue;
use proptest::prelude::*;

fn series(r: f64, t: f64, y: f64) -> ComplexValue {
    k_series(ComplexValue::new(r, t), y).unwrap().to_value()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dispatcher_conjugates_in_t(r in -1.5f64..1.5, t in 1.0f64..300.0, y in 0.05f64..400.0) {
        let a = evaluate(r, t, y).unwrap();
        let b = evaluate(r, -t, y).unwrap();
        prop_assert_eq!(a.value.conj(), b.value);
        prop_assert_eq!(a.method, b.method);
    }

    #[test]
    fn order_is_even(r in -1.5f64..1.5, t in 0.5f64..80.0, y in 0.05f64..1.9) {
        let a = series(r, t, y);
        let b = series(-r, -t, y);
        prop_assert!(a.rel_deviation(&b) < 1e-14);
    }

    #[test]
    fn conjugate_order_gives_conjugate_value(r in -1.5f64..1.5, t in 0.5f64..80.0, y in 0.05f64..1.9) {
        let a = series(r, t, y);
        let b = series(r, -t, y);
        prop_assert!(a.conj().rel_deviation(&b) < 1e-14);
    }

    #[test]
    fn three_term_recurrence(r in -0.5f64..0.5, t in 0.5f64..60.0, y in 0.1f64..1.9) {
        // K_{ν+1} − K_{ν−1} = (2ν/y) K_ν
        let lhs = series(r + 1.0, t, y) - series(r - 1.0, t, y);
        let nu = ComplexValue::new(2.0 * r / y, 2.0 * t / y);
        let rhs = nu * series(r, t, y);
        prop_assert!(lhs.rel_deviation(&rhs) < 1e-12);
    }

    #[test]
    fn small_argument_envelope_holds(r in 0.5f64..1.5, t in 30.0f64..150.0, y in 1e-4f64..1.0) {
        let k = series(r - 0.5, t, y);
        prop_assert!(k.abs() <= small_y_envelope(r, t, y).unwrap());
    }

    #[test]
    fn airy_solves_its_equation(x in -20.0f64..20.0) {
        // Ai'' = x Ai, by central differences
        let h = 1e-3;
        let a = airy(x).unwrap();
        let p = airy(x + h).unwrap();
        let m = airy(x - h).unwrap();
        let second = (p.ai - 2.0 * a.ai + m.ai) / (h * h);
        let scale = a.ai.abs().max(a.ai_prime.abs()).max(1e-300);
        prop_assert!((second - x * a.ai).abs() <= 1e-4 * scale * (1.0 + x.abs()));
        // Ai' as the derivative of Ai
        let first = (p.ai - m.ai) / (2.0 * h);
        prop_assert!((first - a.ai_prime).abs() <= 1e-5 * scale * (1.0 + x.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fourier_part_is_even_and_periodic(
        r in 0.5f64..1.5, t in 30.0f64..80.0, y in 0.8f64..5.0, x in -1.0f64..1.0,
    ) {
        let opts = EisensteinOptions { kernel: KernelSource::Asymptotic, ..EisensteinOptions::default() };
        let d = FourierData::new(y, ComplexValue::new(r, t), &opts).unwrap();
        prop_assert_eq!(d.fourier_part(x), d.fourier_part(-x));
        let scale: f64 = d.modes.iter().map(|m| m.abs()).sum();
        let diff = (d.fourier_part(x + 1.0) - d.fourier_part(x)).abs();
        prop_assert!(diff <= 1e-12 * scale);
    }

    #[test]
    fn hecke_multiplicativity(r in 0.5f64..1.5, t in 30.0f64..200.0, m in 1i64..60, n in 1i64..60) {
        prop_assume!(gcd(m, n) == 1);
        let s = ComplexValue::new(r, t);
        let c = |k| fourier_coefficient(k, s).unwrap();
        let lhs = c(m * n) * c(1);
        let rhs = c(m) * c(n);
        prop_assert!(lhs.rel_deviation(&rhs) < 1e-12);
    }

    #[test]
    fn coefficients_on_the_critical_line_are_balanced(t in 30.0f64..200.0, n in 1i64..500) {
        // r = 1/2: |n|^{it} σ_{−2it}(n) pairs d with n/d, so c_n/c_1 is real
        let s = ComplexValue::new(0.5, t);
        let a = fourier_coefficient(n, s).unwrap() / fourier_coefficient(1, s).unwrap();
        prop_assert!(a.im().abs() <= 1e-9 * a.abs().max(1.0));
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
