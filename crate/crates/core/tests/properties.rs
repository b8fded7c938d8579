use proptest::prelude::*;
use qensemble::density::LimitingDensity;
use qensemble::moments::{moment_closed, symmetry_pair, EnsembleParams};
use qensemble::orthopoly::zeros;
use qensemble::qcore::{q_binomial, q_int, q_pochhammer_finite, ExactScalar};

fn rational() -> impl Strategy<Value = ExactScalar> {
    (-40i64..40, 1i64..25).prop_map(|(n, d)| ExactScalar::new(n, d).unwrap())
}

fn q_exact() -> impl Strategy<Value = ExactScalar> {
    (2i64..30).prop_flat_map(|d| (1..d).prop_map(move |n| ExactScalar::new(n, d).unwrap()))
}

fn a_exact() -> impl Strategy<Value = ExactScalar> {
    (1i64..20, 1i64..8).prop_map(|(n, d)| ExactScalar::new(-n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_identities(x in rational(), y in rational(), z in rational()) {
        prop_assert_eq!((x.clone() + y.clone()) - y.clone(), x.clone());
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        if !y.is_zero() {
            prop_assert_eq!((x.clone() * y.clone()) / y.clone(), x.clone());
        }
        prop_assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
    }

    #[test]
    fn q_binomial_pascal(q in q_exact(), n in 1i64..14, k in 0i64..14) {
        prop_assume!(k <= n);
        let whole = q_binomial(n, k, &q).unwrap();
        prop_assert_eq!(whole.clone(), q_binomial(n, n - k, &q).unwrap());
        if k >= 1 {
            let left = q_binomial(n - 1, k - 1, &q).unwrap();
            let right = if k < n {
                q_binomial(n - 1, k, &q).unwrap() * q.pow(k as i32).unwrap()
            } else {
                ExactScalar::zero()
            };
            prop_assert_eq!(whole, left + right);
        }
    }

    #[test]
    fn q_integers_are_geometric_sums(q in q_exact(), n in 0i64..20) {
        let sum = (0..n).map(|i| q.pow(i as i32).unwrap()).fold(ExactScalar::zero(), |s, t| s + t);
        prop_assert_eq!(q_int(n, &q).unwrap(), sum);
    }

    #[test]
    fn pochhammer_splits(q in q_exact(), z in rational(), m in 0usize..8, n in 0usize..8) {
        let whole = q_pochhammer_finite(&z, &q, m + n);
        let shifted = z.clone() * q.pow(m as i32).unwrap();
        prop_assert_eq!(whole, q_pochhammer_finite(&z, &q, m) * q_pochhammer_finite(&shifted, &q, n));
    }

    #[test]
    fn reciprocal_symmetry(q in q_exact(), a in a_exact(), n in 1usize..4, p in 0usize..6) {
        let params = EnsembleParams::new(q, a, n).unwrap();
        let (lhs, rhs) = symmetry_pair(&params, p);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn float_tracks_exact(q in q_exact(), a in a_exact(), n in 1usize..5, p in 0usize..7) {
        let exact = moment_closed(&EnsembleParams::new(q.clone(), a.clone(), n).unwrap(), p).to_f64();
        let float = moment_closed(&EnsembleParams::new(q.to_f64(), a.to_f64(), n).unwrap(), p);
        prop_assert!((exact - float).abs() <= 1e-10 * exact.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn density_is_a_probability(a in -4.0f64..-0.05, lambda in 0.05f64..4.0) {
        let rho = LimitingDensity::new(a, lambda).unwrap();
        for i in 0..=200 {
            let x = a + (1.0 - a) * i as f64 / 200.0;
            prop_assert!(rho.value(x) >= 0.0 && rho.value(x).is_finite());
        }
        prop_assert!((rho.cdf(1.0, 1e-11).unwrap() - 1.0).abs() < 1e-8);
        let mean = (a + 1.0) * (-(-lambda).exp_m1()) / lambda;
        prop_assert!((rho.moment(1, 1e-11).unwrap() - mean).abs() < 1e-8);
    }

    #[test]
    fn zeros_are_simple_and_inside(a in -4.0f64..-0.05, lambda in 0.1f64..3.0, n in 1usize..120) {
        let z = zeros(&EnsembleParams::from_scaling(a, lambda, n).unwrap());
        prop_assert_eq!(z.len(), n);
        prop_assert!(z.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(z[0] > a - 1e-12 && z[n - 1] < 1.0 + 1e-12);
    }
}
