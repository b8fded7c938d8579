//! Stieltjes transform `G(y) = ∫ rho(x) / (y - x) dx` of the limiting density.

use super::quadrature::integrate_edges;
use super::{fold_parameter, regime, u_v, LimitingDensity, RegimeKind};
use crate::asymptotics::{m_p0, ScalingParams};
use crate::error::{domain, Result};

/// Checks that `y` lies where the one-dimensional integral representation
/// holds, for the folded parameter `a` in `[-1, 0)`.
fn check_base(y: f64, a: f64, lambda: f64) -> Result<()> {
    let kind = regime(a, lambda)?.kind;
    let sp = ScalingParams::new(a, lambda)?;
    let (u, v) = u_v(a, sp.s(), sp.one_minus_s());
    let floor = (a + 1.0).abs() * sp.s();
    if !(y.abs() > floor) {
        return Err(domain(format!("|y| = {} must exceed |a+1| e^(-lambda) = {floor}", y.abs())));
    }
    let right = if kind == RegimeKind::TwoSoftEdges { u + v } else { 1.0 };
    let left = if kind == RegimeKind::TwoHardEdges { a } else { u - v };
    if !(y > right || y < left) {
        return Err(domain(format!(
            "y = {y} must lie outside [{left}, {right}] (need y > {right} or y < {left})"
        )));
    }
    Ok(())
}

/// Validates `y` for the integral representation at any `a < 0`.
pub fn stieltjes_domain(y: f64, a: f64, lambda: f64) -> Result<()> {
    let (base, mirrored) = fold_parameter(a)?;
    check_base(if mirrored { y / a } else { y }, base, lambda)
}

fn base_transform(y: f64, a: f64, lambda: f64, tol: f64) -> Result<f64> {
    check_base(y, a, lambda)?;
    let sp = ScalingParams::new(a, lambda)?;
    let integrand = |t: f64| {
        let shift = y - (a + 1.0) * (1.0 - t);
        let root = (shift * shift + 4.0 * a * t * (1.0 - t)).max(0.0).sqrt();
        1.0 / ((1.0 - t) * root.copysign(shift))
    };
    Ok(integrate_edges(integrand, 0.0, sp.one_minus_s(), tol * lambda)?.value / lambda)
}

/// `G(y)` through its one-dimensional `t`-integral. For `a < -1` this uses
/// `G^{(a)}(y) = (1/a) G^{(1/a)}(y/a)`.
pub fn stieltjes(y: f64, a: f64, lambda: f64, tol: f64) -> Result<f64> {
    let (base, mirrored) = fold_parameter(a)?;
    if mirrored {
        Ok(base_transform(y / a, base, lambda, tol * a.abs())? / a)
    } else {
        base_transform(y, base, lambda, tol)
    }
}

/// `G(y)` by integrating the density against `1/(y - x)`.
pub fn stieltjes_direct(y: f64, a: f64, lambda: f64, tol: f64) -> Result<f64> {
    let density = LimitingDensity::new(a, lambda)?;
    let (lo, hi) = density.support();
    if y >= lo && y <= hi {
        return Err(domain(format!("y = {y} lies in the support [{lo}, {hi}]")));
    }
    density.integrate(|x| 1.0 / (y - x), tol)
}

/// Partial sum `sum_{p <= terms} M_{p,0} / y^{p+1}` and a bound on the tail
/// from `|M_{p,0}| <= max(1, |a|)^p`.
pub fn stieltjes_series(y: f64, a: f64, lambda: f64, terms: usize) -> Result<(f64, f64)> {
    let sp = ScalingParams::new(a, lambda)?;
    let r = a.abs().max(1.0) / y.abs();
    if !(r < 1.0) {
        return Err(domain(format!("series needs |y| > max(1, |a|), got y = {y}")));
    }
    let mut sum = 0.0;
    let mut inv = 1.0 / y;
    for p in 0..=terms {
        sum += m_p0(p, &sp) * inv;
        inv /= y;
    }
    let tail = r.powi(terms as i32 + 1) / (y.abs() * (1.0 - r));
    Ok((sum, tail))
}
