//! q-integers, q-factorials, q-binomials and q-Pochhammer symbols.

use crate::error::{domain, Error, Result};
use crate::qcore::scalar::{pow_nonneg, Scalar};

/// Deformation parameters `(q, a)` with `0 < q < 1` and `a < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QParams<S = crate::qcore::ExactScalar> {
    q: S,
    a: S,
}

impl<S: Scalar> QParams<S> {
    pub fn new(q: S, a: S) -> Result<Self> {
        if !(q > S::zero() && q < S::one()) {
            return Err(Error::InvalidParams(format!("q = {q} must lie in (0, 1)")));
        }
        if !(a < S::zero()) {
            return Err(Error::InvalidParams(format!("a = {a} must be negative")));
        }
        Ok(Self { q, a })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    /// The parameters with `a` replaced by `1/a`.
    pub fn reciprocal_a(&self) -> Self {
        Self {
            q: self.q.clone(),
            a: S::one() / self.a.clone(),
        }
    }

    pub fn to_f64(&self) -> QParams<f64> {
        QParams {
            q: self.q.to_f64(),
            a: self.a.to_f64(),
        }
    }
}

fn check_q_closed<S: Scalar>(q: &S) -> Result<()> {
    if q > &S::zero() && q <= &S::one() {
        Ok(())
    } else {
        Err(domain(format!("q = {q} must lie in (0, 1]")))
    }
}

/// `1 + q + ... + q^(n-1)` for `n >= 0`; no argument checks.
pub(crate) fn qint<S: Scalar>(n: usize, q: &S) -> S {
    let mut acc = S::zero();
    let mut term = S::one();
    for _ in 0..n {
        acc = acc + term.clone();
        term = term * q.clone();
    }
    acc
}

pub(crate) fn qfact<S: Scalar>(n: usize, q: &S) -> S {
    (1..=n).fold(S::one(), |acc, m| acc * qint(m, q))
}

/// `[n]!! = [n][n-2]...`, ending at `[1]` or `[2]`; `[0]!! = [-1]!! = 1`.
pub(crate) fn qdfact<S: Scalar>(n: i64, q: &S) -> S {
    let mut acc = S::one();
    let mut m = n;
    while m > 0 {
        acc = acc * qint(m as usize, q);
        m -= 2;
    }
    acc
}

/// Gaussian binomial, zero outside `0 <= k <= n`.
pub(crate) fn qbinom<S: Scalar>(n: usize, k: usize, q: &S) -> S {
    if k > n {
        return S::zero();
    }
    let k = k.min(n - k);
    let mut num = S::one();
    let mut den = S::one();
    for i in 1..=k {
        num = num * qint(n - k + i, q);
        den = den * qint(i, q);
    }
    num / den
}

/// The q-integer `[n]_q = (1 - q^n)/(1 - q)`. At `q = 1` this is `n`.
pub fn q_int<S: Scalar>(n: i64, q: &S) -> Result<S> {
    if n < 0 {
        return Err(domain(format!("q-integer of negative n = {n}")));
    }
    check_q_closed(q)?;
    Ok(qint(n as usize, q))
}

pub fn q_factorial<S: Scalar>(n: i64, q: &S) -> Result<S> {
    if n < 0 {
        return Err(domain(format!("q-factorial of negative n = {n}")));
    }
    check_q_closed(q)?;
    Ok(qfact(n as usize, q))
}

/// q-double factorial with the convention `[0]!! = [-1]!! = 1`.
pub fn q_double_factorial<S: Scalar>(n: i64, q: &S) -> Result<S> {
    if n < -1 {
        return Err(domain(format!("q-double factorial needs n >= -1, got {n}")));
    }
    check_q_closed(q)?;
    Ok(qdfact(n, q))
}

pub fn q_binomial<S: Scalar>(n: i64, k: i64, q: &S) -> Result<S> {
    if k < 0 || k > n {
        return Err(domain(format!("q-binomial needs 0 <= k <= n, got n = {n}, k = {k}")));
    }
    check_q_closed(q)?;
    Ok(qbinom(n as usize, k as usize, q))
}

/// `(z; q)_n = (1 - z)(1 - zq)...(1 - zq^(n-1))`.
pub fn q_pochhammer_finite<S: Scalar>(z: &S, q: &S, n: usize) -> S {
    let mut acc = S::one();
    let mut zq = z.clone();
    for _ in 0..n {
        acc = acc * (S::one() - zq.clone());
        zq = zq * q.clone();
    }
    acc
}

/// `(z; q)_n` with unit-step exponents is often needed at `z = q`.
pub(crate) fn q_shifted_factorial<S: Scalar>(q: &S, n: usize) -> S {
    q_pochhammer_finite(q, q, n)
}

/// Sign and log-magnitude of a truncated infinite product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProduct {
    /// `0.0` when some factor vanishes exactly, otherwise `+1.0` or `-1.0`.
    pub sign: f64,
    pub ln_abs: f64,
    pub terms: usize,
}

impl LogProduct {
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

const MAX_PRODUCT_TERMS: usize = 100_000_000;

/// `(z; q)_inf` in log form. Factors are taken until the log-tail bound
/// `sum_{l > L} |z| q^l / (1 - |z| q^l)` drops below `tol`.
pub fn log_q_pochhammer_infinite(z: f64, q: f64, tol: f64) -> Result<LogProduct> {
    if !(q.abs() < 1.0) {
        return Err(domain(format!("infinite q-Pochhammer needs |q| < 1, got q = {q}")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut sign = 1.0;
    let mut ln_abs = 0.0;
    let mut zq = z;
    let qa = q.abs();
    for l in 0..MAX_PRODUCT_TERMS {
        let factor = 1.0 - zq;
        if factor == 0.0 {
            return Ok(LogProduct {
                sign: 0.0,
                ln_abs: f64::NEG_INFINITY,
                terms: l + 1,
            });
        }
        if factor < 0.0 {
            sign = -sign;
        }
        ln_abs += if zq.abs() < 0.5 {
            (-zq).ln_1p()
        } else {
            factor.abs().ln()
        };
        zq *= q;
        let next = zq.abs();
        if next < 1.0 {
            let bound = next / ((1.0 - qa) * (1.0 - next));
            if bound < tol {
                return Ok(LogProduct {
                    sign,
                    ln_abs,
                    terms: l + 1,
                });
            }
        }
    }
    Err(Error::Truncation {
        terms: MAX_PRODUCT_TERMS,
    })
}

/// `(z; q)_inf = prod_{l >= 0} (1 - z q^l)` to relative accuracy about `tol`.
pub fn q_pochhammer_infinite(z: f64, q: f64, tol: f64) -> Result<f64> {
    Ok(log_q_pochhammer_infinite(z, q, tol)?.value())
}

/// Helper used by callers that want `q^n` for a signed exponent on either mode.
pub(crate) fn qpow<S: Scalar>(q: &S, exp: i64) -> S {
    if exp >= 0 {
        pow_nonneg(q, exp as usize)
    } else {
        S::one() / pow_nonneg(q, (-exp) as usize)
    }
}
