//! Log-gamma, the regularised incomplete beta function and Stirling numbers.

use num_bigint::BigInt;

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the series in its accurate range.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// `n!` as a float; exact through `22!`.
pub(crate) fn factorial(n: usize) -> f64 {
    if n > 170 {
        return ln_gamma(n as f64 + 1.0).exp();
    }
    (1..=n).map(|k| k as f64).product()
}

const CF_MAX_ITER: usize = 10_000;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_cf(x: f64, a: f64, b: f64) -> f64 {
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let guard = |v: f64| if v.abs() < CF_TINY { CF_TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Regularised incomplete beta function `I_x(alpha, beta)`.
pub fn inc_beta_reg(x: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("incomplete beta needs 0 <= x <= 1, got {x}")));
    }
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(domain(format!(
            "incomplete beta needs positive parameters, got ({alpha}, {beta})"
        )));
    }
    Ok(inc_beta_unchecked(x, alpha, beta))
}

pub(crate) fn inc_beta_unchecked(x: f64, alpha: f64, beta: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let front = (ln_gamma(alpha + beta) - ln_gamma(alpha) - ln_gamma(beta)
        + alpha * x.ln()
        + beta * (-x).ln_1p())
    .exp();
    if x < (alpha + 1.0) / (alpha + beta + 2.0) {
        front * beta_cf(x, alpha, beta) / alpha
    } else {
        1.0 - front * beta_cf(1.0 - x, beta, alpha) / beta
    }
}

/// Signed Stirling number of the first kind from
/// `s(n+1, k) = s(n, k-1) - n s(n, k)`; zero when `k > n`.
pub fn stirling_first(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut row = vec![BigInt::from(1)];
    for m in 0..n {
        let mut next = vec![BigInt::from(0); m + 2];
        for (j, v) in row.iter().enumerate() {
            next[j + 1] += v;
            next[j] -= v * BigInt::from(m);
        }
        row = next;
    }
    row.swap_remove(k)
}
