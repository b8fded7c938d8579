//! Cross-module consistency through the public API only.

use qensemble::asymptotics::{m_p0, ScalingParams};
use qensemble::combinat::{moment_component_via_matching, moment_via_motzkin};
use qensemble::density::{stieltjes, stieltjes_direct, stieltjes_series, LimitingDensity};
use qensemble::moments::{gue_moment, moment_closed, qgue_moment_rescaled, EnsembleParams};
use qensemble::orthopoly::{jackson_moment, zeros, DensityProfile};
use qensemble::qcore::{ExactScalar, QParams};

fn r(n: i64, d: i64) -> ExactScalar {
    ExactScalar::new(n, d).unwrap()
}

#[test]
fn four_routes_for_one_moment() {
    let (q, a, n) = (r(3, 5), r(-3, 2), 3);
    let qp = QParams::new(q.clone(), a.clone()).unwrap();
    for p in 0..=6 {
        let closed = moment_closed(&EnsembleParams::new(q.clone(), a.clone(), n).unwrap(), p);
        let paths: ExactScalar = (0..n).map(|j| moment_via_motzkin(p, j, &qp).unwrap()).sum();
        let matchings: ExactScalar = (0..n).map(|j| moment_component_via_matching(p, j, &qp).unwrap()).sum();
        assert_eq!(closed, paths);
        assert_eq!(closed, matchings);
        let lattice = jackson_moment(&EnsembleParams::new(0.6, -1.5, n).unwrap(), p, 1e-15).unwrap();
        assert!((lattice - closed.to_f64()).abs() < 1e-9 * closed.to_f64().abs().max(1.0));
    }
}

#[test]
fn classical_limit() {
    for n in 1..=5 {
        for p in [2, 4, 6] {
            assert_eq!(qgue_moment_rescaled(n, p, &ExactScalar::one()).unwrap(), gue_moment(n, p).unwrap());
        }
    }
}

#[test]
fn lattice_mass_is_n() {
    let params = EnsembleParams::new(0.7, -2.0, 5).unwrap();
    let profile = DensityProfile::on_lattice(&params, 1e-14, 1e-16).unwrap();
    assert!((profile.lattice_mass().unwrap() - 5.0).abs() < 1e-9);
}

#[test]
fn scaled_moments_approach_limit() {
    // q^{p/2} m_{N,p} / N -> M_{p,0} with O(1/N^2) corrections.
    let (a, lambda) = (-0.5, 1.0);
    let sp = ScalingParams::new(a, lambda).unwrap();
    for p in [2, 4] {
        let err = |n: usize| {
            let params = EnsembleParams::from_scaling(a, lambda, n).unwrap();
            let q = *params.q();
            (q.powf(p as f64 / 2.0) * moment_closed(&params, p) / n as f64 - m_p0(p, &sp)).abs()
        };
        assert!(err(200) < err(100) && err(100) < 1e-3);
    }
}

#[test]
fn zeros_reproduce_moments() {
    // Power sums of the zeros of U_N versus the limiting moments.
    let (a, lambda, n) = (-1.0 / 3.0, 2f64.ln(), 1500);
    let z = zeros(&EnsembleParams::from_scaling(a, lambda, n).unwrap());
    let rho = LimitingDensity::new(a, lambda).unwrap();
    for p in 1..=4 {
        let empirical = z.iter().map(|&x| f64::powi(x, p)).sum::<f64>() / n as f64;
        assert!((empirical - rho.moment(p as usize, 1e-12).unwrap()).abs() < 5e-3, "p = {p}");
    }
}

#[test]
fn stieltjes_three_ways() {
    for (y, a, lambda) in [(5.0, -0.5, 1.0), (-6.0, -1.0 / 3.0, 10f64.ln()), (8.0, -3.0, 0.7)] {
        let t = stieltjes(y, a, lambda, 1e-13).unwrap();
        let d = stieltjes_direct(y, a, lambda, 1e-13).unwrap();
        let (s, tail) = stieltjes_series(y, a, lambda, 30).unwrap();
        assert!((t - d).abs() < 1e-9);
        assert!((t - s).abs() < 1e-9 + tail, "y={y} a={a}");
    }
}
