//! Large-N expansion of the moments under the scaling `q = exp(-lambda/N)`:
//! `q^{p/2} m_{N,p} = M_{p,0} N + M_{p,1} / N + O(N^{-3})`.

mod special;

pub use special::{inc_beta_reg, ln_gamma, stirling_first};
pub(crate) use special::{factorial, inc_beta_unchecked};

use crate::error::{domain, Error, Result};
use crate::moments::{moment_closed, EnsembleParams};

/// `(a, lambda)` with `s = exp(-lambda)` cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    a: f64,
    lambda: f64,
    s: f64,
    /// `1 - s`, computed without cancellation.
    one_minus_s: f64,
}

impl ScalingParams {
    pub fn new(a: f64, lambda: f64) -> Result<Self> {
        if !(a < 0.0 && a.is_finite()) {
            return Err(Error::InvalidParams(format!("a = {a} must be negative")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParams(format!("lambda = {lambda} must be positive")));
        }
        Ok(Self {
            a,
            lambda,
            s: (-lambda).exp(),
            one_minus_s: -(-lambda).exp_m1(),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn one_minus_s(&self) -> f64 {
        self.one_minus_s
    }

    /// `lambda_1 = log(1 - a)`.
    pub fn lambda1(&self) -> f64 {
        (-self.a).ln_1p()
    }

    /// `lambda_2 = log(1 - a) - log(-a)`.
    pub fn lambda2(&self) -> f64 {
        self.lambda1() - (-self.a).ln()
    }
}

/// `(a+1)^{p-2l} (-a)^l (p-l-1)! / (l! (p-2l)!)`, shared by both `M_{p,0}` forms.
fn m0_weight(p: usize, l: usize, a: f64) -> f64 {
    (a + 1.0).powi((p - 2 * l) as i32) * (-a).powi(l as i32) * factorial(p - l - 1)
        / (factorial(l) * factorial(p - 2 * l))
}

/// `M_{p,0} = (1/lambda) sum_l (a+1)^{p-2l} (-a)^l (p-l-1)!/(l!(p-2l)!) I_{1-s}(l+1, p-l)`,
/// with `M_{0,0} = 1`.
pub fn m_p0(p: usize, sp: &ScalingParams) -> f64 {
    if p == 0 {
        return 1.0;
    }
    let x = sp.one_minus_s();
    let sum: f64 = (0..=p / 2)
        .map(|l| m0_weight(p, l, sp.a()) * inc_beta_unchecked(x, (l + 1) as f64, (p - l) as f64))
        .sum();
    sum / sp.lambda()
}

/// `M_{p,0}` with the incomplete beta replaced by the finite binomial tail
/// `sum_{j=l+1}^{p} C(p,j) (1-s)^j s^{p-j}`.
pub fn m_p0_alt(p: usize, sp: &ScalingParams) -> f64 {
    if p == 0 {
        return 1.0;
    }
    let (s, t) = (sp.s(), sp.one_minus_s());
    let sum: f64 = (0..=p / 2)
        .map(|l| {
            let tail: f64 = (l + 1..=p)
                .map(|j| {
                    factorial(p) / (factorial(j) * factorial(p - j))
                        * t.powi(j as i32)
                        * s.powi((p - j) as i32)
                })
                .sum();
            m0_weight(p, l, sp.a()) * tail
        })
        .sum();
    sum / sp.lambda()
}

/// `M_{p,1}`; the `1/(l-1)!` factor vanishes at `l = 0`, and `M_{0,1} = 0`.
pub fn m_p1(p: usize, sp: &ScalingParams) -> f64 {
    if p == 0 {
        return 0.0;
    }
    let (a, s, t) = (sp.a(), sp.s(), sp.one_minus_s());
    let pf = p as f64;
    let sum: f64 = (0..=p / 2)
        .map(|l| {
            let prefactor =
                (a + 1.0).powi((p - 2 * l) as i32) * (-a).powi(l as i32) / (factorial(p - 2 * l) * factorial(l));
            let beta_part = 0.5 * pf * factorial(p - l - 1) * inc_beta_unchecked(t, (l + 1) as f64, (p - l) as f64);
            let edge_part = if l == 0 {
                0.0
            } else {
                factorial(p - 1) / factorial(l - 1)
                    * s.powi((p - l) as i32)
                    * t.powi(l as i32 - 1)
                    * ((p - l + 2) as f64 - (pf + 1.0) * s)
            };
            prefactor * (beta_part + edge_part)
        })
        .sum();
    -sp.lambda() * pf / 12.0 * sum
}

/// `M_{2h,0}` at `a = -1`: `I_{1-s}(h+1, h) / (lambda h)`.
pub fn m_even0_minus_one(half: usize, lambda: f64) -> Result<f64> {
    if half == 0 {
        return Err(domain("the a = -1 formula needs p >= 2"));
    }
    let sp = ScalingParams::new(-1.0, lambda)?;
    let h = half as f64;
    Ok(inc_beta_unchecked(sp.one_minus_s(), h + 1.0, h) / (lambda * h))
}

/// `M_{2h,1}` at `a = -1`:
/// `-(lambda h / 6) (I_{1-s}(h+1, h) + (2h-1)!/(h!(h-1)!) s^h (1-s)^{h-1} (2 + h - (2h+1) s))`.
pub fn m_even1_minus_one(half: usize, lambda: f64) -> Result<f64> {
    if half == 0 {
        return Err(domain("the a = -1 formula needs p >= 2"));
    }
    let sp = ScalingParams::new(-1.0, lambda)?;
    let (s, t) = (sp.s(), sp.one_minus_s());
    let h = half as f64;
    let ratio = factorial(2 * half - 1) / (factorial(half) * factorial(half - 1));
    let edge = ratio * s.powi(half as i32) * t.powi(half as i32 - 1) * (2.0 + h - (2.0 * h + 1.0) * s);
    Ok(-(lambda * h / 6.0) * (inc_beta_unchecked(t, h + 1.0, h) + edge))
}

/// `q^{p/2} m_{N,p} - M_{p,0} N - M_{p,1} / N` at `q = exp(-lambda/N)`, with the
/// moment evaluated in double precision from the closed form.
pub fn expansion_residual(p: usize, sp: &ScalingParams, n: usize) -> Result<f64> {
    let params = EnsembleParams::from_scaling(sp.a(), sp.lambda(), n)?;
    let q = *params.q();
    let moment = moment_closed(&params, p);
    if !moment.is_finite() {
        return Err(Error::Overflow(format!("m_(N={n}, p={p}) is not finite in double precision")));
    }
    let nf = n as f64;
    Ok(q.powf(0.5 * p as f64) * moment - m_p0(p, sp) * nf - m_p1(p, sp) / nf)
}

/// `lambda^{-p/2} M_{p,0}` at `a = -1 + r sqrt(lambda)`.
pub fn continuum_moment_limit(p: usize, r: f64, lambda: f64) -> Result<f64> {
    let a = -1.0 + r * lambda.sqrt();
    if !(a < 0.0) {
        return Err(domain(format!("a = -1 + r sqrt(lambda) = {a} must be negative")));
    }
    let sp = ScalingParams::new(a, lambda)?;
    Ok(m_p0(p, &sp) / lambda.powf(0.5 * p as f64))
}

/// `p`-th moment of the semicircle law shifted by `r`:
/// `sum_l C(p, 2l) r^{p-2l} Catalan(l)`.
pub fn shifted_semicircle_moment(p: usize, r: f64) -> f64 {
    (0..=p / 2)
        .map(|l| {
            let binom = factorial(p) / (factorial(2 * l) * factorial(p - 2 * l));
            let catalan = factorial(2 * l) / (factorial(l + 1) * factorial(l));
            binom * r.powi((p - 2 * l) as i32) * catalan
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(a: f64, lambda: f64) -> ScalingParams {
        ScalingParams::new(a, lambda).unwrap()
    }

    #[test]
    fn first_moment() {
        for (a, lambda) in [(-0.5, 1.0f64), (-2.0, 0.3), (-1.0, 2.0)] {
            let expected = (a + 1.0) * (1.0 - (-lambda).exp()) / lambda;
            assert!((m_p0(1, &sp(a, lambda)) - expected).abs() < 1e-14);
        }
        assert_eq!(m_p0(0, &sp(-0.5, 1.0)), 1.0);
        assert_eq!(m_p1(0, &sp(-0.5, 1.0)), 0.0);
    }

    #[test]
    fn two_representations_agree() {
        for a in [-1.0, -0.5, -2.0] {
            for lambda in [0.2, std::f64::consts::LN_2, 2.0] {
                let params = sp(a, lambda);
                for p in 1..=10 {
                    let (m, alt) = (m_p0(p, &params), m_p0_alt(p, &params));
                    assert!((m - alt).abs() < 1e-12 * m.abs().max(1.0), "a={a} lambda={lambda} p={p}");
                }
            }
        }
    }

    #[test]
    fn even_coefficients_positive() {
        for a in [-1.0, -0.3, -4.0] {
            for p in (2..=10).step_by(2) {
                assert!(m_p0(p, &sp(a, 0.8)) > 0.0);
            }
        }
    }

    #[test]
    fn minus_one_specialisation() {
        for lambda in [0.1, 0.5, 1.0, 3.0] {
            let params = sp(-1.0, lambda);
            for half in 1..=5 {
                let m0 = m_even0_minus_one(half, lambda).unwrap();
                let m1 = m_even1_minus_one(half, lambda).unwrap();
                assert!((m_p0(2 * half, &params) - m0).abs() < 1e-12 * m0.abs().max(1.0));
                assert!((m_p1(2 * half, &params) - m1).abs() < 1e-12 * m1.abs().max(1.0));
                assert_eq!(m_p0(2 * half - 1, &params), 0.0);
            }
            let t = 1.0 - (-lambda).exp();
            assert!((m_p0(2, &params) - t * t / lambda).abs() < 1e-14);
        }
    }

    #[test]
    fn first_coefficient_of_mean() {
        // q^{1/2} m_{N,1} expands with M_{1,1} = -lambda (a+1)(1-s)/24.
        for (a, lambda) in [(-0.5, 1.0), (-3.0, 0.4)] {
            let params = sp(a, lambda);
            let expected = -lambda * (a + 1.0) * params.one_minus_s() / 24.0;
            assert!((m_p1(1, &params) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn residual_decays_like_cube() {
        let params = sp(-0.5, 1.0);
        let r: Vec<f64> = [8usize, 16, 32, 64]
            .iter()
            .map(|&n| expansion_residual(2, &params, n).unwrap().abs() * (n as f64).powi(3))
            .collect();
        for w in r.windows(2) {
            assert!((w[0] / w[1] - 1.0).abs() < 0.5, "{r:?}");
        }
        assert_eq!(expansion_residual(0, &params, 16).unwrap(), 0.0);
        assert!(expansion_residual(3, &sp(-1.0, 1.0), 16).unwrap().abs() < 1e-12);
    }

    #[test]
    fn residual_exponent_fit() {
        // Least-squares slope of log|residual| against log N.
        for (a, lambda) in [(-0.5, 0.5), (-1.0, 1.0), (-2.0, 0.7)] {
            let params = sp(a, lambda);
            for p in [2usize, 4, 6] {
                let pts: Vec<(f64, f64)> = [8usize, 16, 32, 64]
                    .iter()
                    .map(|&n| ((n as f64).ln(), expansion_residual(p, &params, n).unwrap().abs().ln()))
                    .collect();
                let mx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
                let my = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
                let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
                    / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
                assert!(-slope >= 2.7, "a={a} lambda={lambda} p={p} slope={slope}");
            }
        }
    }

    #[test]
    fn semicircle() {
        assert_eq!(shifted_semicircle_moment(2, 0.0), 1.0);
        assert_eq!(shifted_semicircle_moment(4, 0.0), 2.0);
        assert_eq!(shifted_semicircle_moment(3, 0.0), 0.0);
        assert_eq!(shifted_semicircle_moment(2, 1.0), 2.0);
        assert!((shifted_semicircle_moment(3, 0.5) - (0.125 + 3.0 * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn continuum_limit_centred() {
        for p in 0..=6 {
            let got = continuum_moment_limit(p, 0.0, 1e-3).unwrap();
            let want = shifted_semicircle_moment(p, 0.0);
            assert!((got - want).abs() <= 0.01 * want.max(1e-3), "p={p} {got} {want}");
        }
        assert!(continuum_moment_limit(2, 40.0, 1e-3).is_err());
    }

    #[test]
    fn scaling_validation() {
        assert!(ScalingParams::new(0.1, 1.0).is_err());
        assert!(ScalingParams::new(-0.5, 0.0).is_err());
        let p = sp(-0.5, 1.0);
        assert!((p.lambda1() - 1.5f64.ln()).abs() < 1e-15);
        assert!((p.lambda2() - 3.0f64.ln()).abs() < 1e-15);
    }
}
