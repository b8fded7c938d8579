//! Closed-form spectral moments `m_{N,p} = E[sum_i x_i^p]` of the ensemble.
//!
//! The formula is a triple sum over `j < N`, `k <= p/2` and `l <= k`; only
//! the factor `q^{j(p-l)} qbinom(j, l)` depends on `j`, so the `(k, l)`
//! coefficients are computed once per call.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::combinat::h_sum_unchecked;
use crate::error::{domain, Error, Result};
use crate::qcore::{pow_nonneg, qbinom, qdfact, qfact, qpow, ExactScalar, QParams, Scalar};

/// `(q, a)` together with the matrix size `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleParams<S = ExactScalar> {
    qparams: QParams<S>,
    n: usize,
}

impl<S: Scalar> EnsembleParams<S> {
    pub fn new(q: S, a: S, n: usize) -> Result<Self> {
        Self::from_qparams(QParams::new(q, a)?, n)
    }

    pub fn from_qparams(qparams: QParams<S>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        Ok(Self { qparams, n })
    }

    pub fn qparams(&self) -> &QParams<S> {
        &self.qparams
    }

    pub fn q(&self) -> &S {
        self.qparams.q()
    }

    pub fn a(&self) -> &S {
        self.qparams.a()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reciprocal_a(&self) -> Self {
        Self {
            qparams: self.qparams.reciprocal_a(),
            n: self.n,
        }
    }
}

impl EnsembleParams<f64> {
    /// The large-N scaling `q = exp(-lambda / N)`.
    pub fn from_scaling(a: f64, lambda: f64, n: usize) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParams(format!("lambda = {lambda} must be positive")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        Self::new((-lambda / n as f64).exp(), a, n)
    }
}

/// Coefficients `c[k][l]` of `q^{j(p-l)} qbinom(j, l)` in the `j`-th summand.
fn coefficients<S: Scalar>(p: usize, params: &QParams<S>) -> Vec<Vec<S>> {
    let (q, a) = (params.q(), params.a());
    let one = S::one();
    let p_fact = qfact(p, q);
    (0..=p / 2)
        .map(|k| {
            let outer = pow_nonneg(&(-a.clone()), k)
                * pow_nonneg(&(one.clone() - q.clone()), k)
                * pow_nonneg(&(a.clone() + one.clone()), p - 2 * k);
            (0..=k)
                .map(|l| {
                    let (pi, li) = (p as i64, l as i64);
                    let exponent = -li * (pi - li) + li * (li - 1) / 2;
                    let ratio = p_fact.clone() / (qdfact(pi - 2 * li, q) * qfact(l, q));
                    outer.clone() * qpow(q, exponent) * ratio * h_sum_unchecked(k - l, p - 2 * k, q)
                })
                .collect()
        })
        .collect()
}

fn component_from<S: Scalar>(coeffs: &[Vec<S>], p: usize, j: usize, q: &S) -> S {
    let mut total = S::zero();
    for row in coeffs {
        for (l, c) in row.iter().enumerate() {
            if l > j {
                break;
            }
            total = total + c.clone() * pow_nonneg(q, j * (p - l)) * qbinom(j, l, q);
        }
    }
    total
}

/// The `j`-th summand `𝔪_{p,j}` of the closed form; `sum_{j<N}` of these is `m_{N,p}`.
pub fn moment_component<S: Scalar>(p: usize, j: usize, params: &QParams<S>) -> S {
    component_from(&coefficients(p, params), p, j, params.q())
}

/// Exact (or float) `m_{N,p}` from the closed-form triple sum, summed term by term in `j`.
pub fn moment_closed<S: Scalar>(params: &EnsembleParams<S>, p: usize) -> S {
    let coeffs = coefficients(p, params.qparams());
    let q = params.q();
    let parts: Vec<S> = (0..params.n())
        .into_par_iter()
        .map(|j| component_from(&coeffs, p, j, q))
        .collect();
    parts.into_iter().sum()
}

/// `(m^{(1/a)}_{N,p}, a^{-p} m^{(a)}_{N,p})`; the two entries are equal.
pub fn symmetry_pair<S: Scalar>(params: &EnsembleParams<S>, p: usize) -> (S, S) {
    let flipped = moment_closed(&params.reciprocal_a(), p);
    let scaled = moment_closed(params, p) / pow_nonneg(params.a(), p);
    (flipped, scaled)
}

fn is_minus_one<S: Scalar>(a: &S) -> bool {
    (a.clone() + S::one()).is_zero()
}

/// Sum of the `a = -1` reduction without the `(1-q)^{p/2}` factor; valid for `q = 1`.
fn qgue_reduced<S: Scalar>(n: usize, half: usize, q: &S) -> S {
    let p = 2 * half;
    let p_fact = qfact(p, q);
    let coeffs: Vec<S> = (0..=half)
        .map(|l| {
            let li = l as i64;
            let exponent = -li * (p as i64 - li) + li * (li - 1) / 2;
            qpow(q, exponent) * p_fact.clone() / (qdfact((p - 2 * l) as i64, q) * qfact(l, q))
        })
        .collect();
    let mut total = S::zero();
    for j in 0..n {
        for (l, c) in coeffs.iter().enumerate().take(j + 1) {
            total = total + c.clone() * pow_nonneg(q, j * (p - l)) * qbinom(j, l, q);
        }
    }
    total
}

/// `m^{(-1)}_{N,p}` from the reduced `a = -1` formula (only `k = p/2` survives).
pub fn qgue_moment<S: Scalar>(params: &EnsembleParams<S>, p: usize) -> Result<S> {
    if !is_minus_one(params.a()) {
        return Err(domain(format!("the reduced formula needs a = -1, got a = {}", params.a())));
    }
    if p % 2 == 1 {
        return Ok(S::zero());
    }
    let q = params.q();
    Ok(pow_nonneg(&(S::one() - q.clone()), p / 2) * qgue_reduced(params.n(), p / 2, q))
}

/// `(1-q)^{-p/2} m^{(-1)}_{N,p}`, the moment of the rescaled `a = -1` ensemble.
/// Accepts `q = 1`, where it reduces to the GUE moment.
pub fn qgue_moment_rescaled<S: Scalar>(n: usize, p: usize, q: &S) -> Result<S> {
    if !(q > &S::zero() && q <= &S::one()) {
        return Err(domain(format!("q = {q} must lie in (0, 1]")));
    }
    if n == 0 {
        return Err(Error::InvalidParams("N must be positive".into()));
    }
    if p % 2 == 1 {
        return Ok(S::zero());
    }
    Ok(qgue_reduced(n, p / 2, q))
}

/// `int_{-1}^1 x^{2p} w^{(-1)}(x) d_qx = (1-q)^{p+1} [2p-1]_q!!`.
pub fn qgauss_integral<S: Scalar>(p: usize, q: &S) -> S {
    pow_nonneg(&(S::one() - q.clone()), p + 1) * qdfact(2 * p as i64 - 1, q)
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// GUE moment `E Tr H^p` for `p = 2p'`: `(2p'-1)!! sum_l C(N, l+1) C(p', l) 2^l`.
pub fn gue_moment(n: usize, p: usize) -> Result<ExactScalar> {
    if p % 2 == 1 {
        return Err(domain(format!("the GUE moment formula is for even p, got {p}")));
    }
    if n == 0 {
        return Err(Error::InvalidParams("N must be positive".into()));
    }
    let half = p / 2;
    let dfact: BigInt = (1..p).step_by(2).map(BigInt::from).product();
    let sum: BigInt = (0..=half)
        .map(|l| binomial(n, l + 1) * binomial(half, l) * (BigInt::from(1) << l))
        .sum();
    Ok(ExactScalar::from_bigint(dfact * sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d).unwrap()
    }

    fn ens(q: ExactScalar, a: ExactScalar, n: usize) -> EnsembleParams {
        EnsembleParams::new(q, a, n).unwrap()
    }

    #[test]
    fn low_moments_match_closed_expressions() {
        let one = ExactScalar::one();
        for (q, a) in [(r(1, 2), r(-1, 3)), (r(2, 3), r(-2, 1)), (r(3, 4), r(-1, 1))] {
            for n in 1..=5 {
                let params = ens(q.clone(), a.clone(), n);
                let qn = q.pow(n as i32).unwrap();
                assert_eq!(moment_closed(&params, 0), ExactScalar::integer(n as i64));
                let m1 = (a.clone() + one.clone()) * (one.clone() - qn.clone()) / (one.clone() - q.clone());
                assert_eq!(moment_closed(&params, 1), m1);
                let bracket = (a.clone() * a.clone() + one.clone()) * q.clone()
                    + qn.clone()
                        * (q.clone()
                            + a.clone()
                                * (one.clone() + r(2, 1) * q.clone() + q.clone() * q.clone() + a.clone() * q.clone()));
                let m2 = (one.clone() - qn) / (q.clone() * (one.clone() - q.clone() * q.clone())) * bracket;
                assert_eq!(moment_closed(&params, 2), m2, "n = {n}");
            }
        }
    }

    #[test]
    fn components() {
        let (q, a) = (r(2, 3), r(-1, 2));
        let params = QParams::new(q.clone(), a.clone()).unwrap();
        let one = ExactScalar::one();
        for j in 0..5 {
            assert_eq!(moment_component(0, j, &params), one);
            let expected = (a.clone() + one.clone()) * q.pow(j as i32).unwrap();
            assert_eq!(moment_component(1, j, &params), expected);
        }
        let expected = a.clone() * a.clone() + a.clone() + one + a * q;
        assert_eq!(moment_component(2, 0, &params), expected);
    }

    #[test]
    fn reciprocal_symmetry() {
        for (q, a) in [(r(1, 2), r(-1, 2)), (r(2, 3), r(-3, 1)), (r(1, 3), r(-1, 1))] {
            for n in 1..=4 {
                for p in 0..=7 {
                    let (lhs, rhs) = symmetry_pair(&ens(q.clone(), a.clone(), n), p);
                    assert_eq!(lhs, rhs);
                }
            }
        }
        let params = ens(r(1, 2), r(-2, 1), 3);
        let (lhs, _) = symmetry_pair(&params, 1);
        let q3 = r(1, 8);
        assert_eq!(lhs, r(1, 2) * (ExactScalar::one() - q3) / r(1, 2));
    }

    #[test]
    fn odd_moments_vanish_at_minus_one() {
        for q in [r(1, 2), r(2, 3)] {
            for n in 1..=5 {
                let params = ens(q.clone(), r(-1, 1), n);
                for p in (1..=9).step_by(2) {
                    assert!(moment_closed(&params, p).is_zero());
                }
            }
        }
    }

    #[test]
    fn reduced_formula_matches() {
        for q in [r(1, 2), r(2, 3)] {
            for n in 1..=4 {
                let params = ens(q.clone(), r(-1, 1), n);
                for p in 0..=8 {
                    assert_eq!(qgue_moment(&params, p).unwrap(), moment_closed(&params, p));
                }
            }
        }
        let params = ens(r(1, 2), r(-1, 2), 2);
        assert!(qgue_moment(&params, 2).is_err());
    }

    #[test]
    fn classical_limit_is_gue() {
        let one = ExactScalar::one();
        for n in 1..=6 {
            for p in (0..=10).step_by(2) {
                let v = qgue_moment_rescaled(n, p, &one).unwrap();
                assert_eq!(v, gue_moment(n, p).unwrap(), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn gue_examples() {
        for n in 1..=8usize {
            let ni = n as i64;
            assert_eq!(gue_moment(n, 0).unwrap(), ExactScalar::integer(ni));
            assert_eq!(gue_moment(n, 2).unwrap(), ExactScalar::integer(ni * ni));
            assert_eq!(gue_moment(n, 4).unwrap(), ExactScalar::integer(2 * ni.pow(3) + ni));
        }
        assert!(gue_moment(3, 3).is_err());
    }

    #[test]
    fn q_gaussian() {
        let q = r(2, 5);
        let one = ExactScalar::one();
        assert_eq!(qgauss_integral(1, &q), (one.clone() - q.clone()) * (one.clone() - q.clone()));
        assert_eq!(qgauss_integral(0, &q), one - q);
    }

    #[test]
    fn even_moments_positive() {
        for a in [r(-1, 2), r(-1, 5), r(-9, 10)] {
            for n in 1..=4 {
                let params = ens(r(1, 2), a.clone(), n);
                for p in (0..=8).step_by(2) {
                    assert!(moment_closed(&params, p).is_positive());
                }
            }
        }
    }

    #[test]
    fn float_mode_tracks_exact() {
        let params = ens(r(2, 3), r(-1, 3), 4);
        let fparams = EnsembleParams::from_qparams(params.qparams().to_f64(), 4).unwrap();
        for p in 0..=8 {
            let exact = moment_closed(&params, p).to_f64();
            let float = moment_closed(&fparams, p);
            assert!((exact - float).abs() <= 1e-12 * exact.abs().max(1.0));
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(EnsembleParams::new(r(1, 2), r(-1, 2), 0).is_err());
        assert!(EnsembleParams::new(r(1, 1), r(-1, 2), 2).is_err());
        assert!(EnsembleParams::new(r(1, 2), r(1, 2), 2).is_err());
        assert!(EnsembleParams::from_scaling(-0.5, 0.0, 4).is_err());
        let p = EnsembleParams::from_scaling(-0.5, 1.0, 4).unwrap();
        assert!((p.q() - (-0.25f64).exp()).abs() < 1e-15);
    }
}
