//! The large-N limiting eigenvalue density under `q = exp(-lambda/N)`, its
//! phase diagram, distribution function, moments and Stieltjes transform.
//!
//! Explicit formulas are written for `a` in `[-1, 0)`. For `a < -1` every
//! quantity is obtained from the parameter `1/a` through the reflection
//! `rho^{(a)}(x) = -(1/a) rho^{(1/a)}(x/a)`.

pub mod quadrature;
mod stieltjes;

pub use stieltjes::{stieltjes, stieltjes_direct, stieltjes_domain, stieltjes_series};

use std::f64::consts::{FRAC_PI_2, PI};

use crate::asymptotics::ScalingParams;
use crate::error::{domain, Result};
use crate::moments::EnsembleParams;
use crate::orthopoly::zeros;
use quadrature::integrate_edges;

/// Relative distance from a threshold at which `lambda` is treated as equal to it.
pub const THRESHOLD_SNAP: f64 = 1e-12;

/// Edge structure of the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegimeKind {
    /// `lambda < lambda_1`: square-root vanishing at `u - v` and `u + v`.
    TwoSoftEdges,
    /// `lambda_1 <= lambda < lambda_2`: the right edge sits at the hard wall `x = 1`.
    SoftHardMixed,
    /// `lambda >= lambda_2`: the support fills `(a, 1)`.
    TwoHardEdges,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRegime {
    pub kind: RegimeKind,
    /// `log(1 - a)`.
    pub lambda1: f64,
    /// `log(1 - a) - log(-a)`.
    pub lambda2: f64,
}

/// `u = (1+a) e^{-lambda}`, `v = 2 sqrt(-a (1 - e^{-lambda}) e^{-lambda})` and the support.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSpec {
    pub u: f64,
    pub v: f64,
    /// Open intervals, ascending.
    pub intervals: Vec<(f64, f64)>,
}

fn check_base(a: f64, lambda: f64) -> Result<()> {
    if !(-1.0..0.0).contains(&a) {
        return Err(domain(format!(
            "explicit formulas need a in [-1, 0), got a = {a}; map a -> 1/a first"
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain(format!("lambda = {lambda} must be positive")));
    }
    Ok(())
}

/// For `a < -1` returns `(1/a, true)`, otherwise `(a, false)`.
pub fn fold_parameter(a: f64) -> Result<(f64, bool)> {
    if !(a < 0.0 && a.is_finite()) {
        return Err(domain(format!("a = {a} must be negative")));
    }
    Ok(if a < -1.0 { (1.0 / a, true) } else { (a, false) })
}

/// Phase of the density. A `lambda` within [`THRESHOLD_SNAP`] of a threshold
/// is assigned to the larger-lambda phase.
pub fn regime(a: f64, lambda: f64) -> Result<DensityRegime> {
    check_base(a, lambda)?;
    let lambda1 = (-a).ln_1p();
    let lambda2 = lambda1 - (-a).ln();
    let at_least = |t: f64| lambda >= t * (1.0 - THRESHOLD_SNAP);
    let kind = if at_least(lambda2) {
        RegimeKind::TwoHardEdges
    } else if at_least(lambda1) {
        RegimeKind::SoftHardMixed
    } else {
        RegimeKind::TwoSoftEdges
    };
    Ok(DensityRegime {
        kind,
        lambda1,
        lambda2,
    })
}

fn u_v(a: f64, s: f64, one_minus_s: f64) -> (f64, f64) {
    ((1.0 + a) * s, 2.0 * (-a * one_minus_s * s).sqrt())
}

pub fn support(a: f64, lambda: f64) -> Result<SupportSpec> {
    let kind = regime(a, lambda)?.kind;
    let sp = ScalingParams::new(a, lambda)?;
    let (u, v) = u_v(a, sp.s(), sp.one_minus_s());
    let interval = match kind {
        RegimeKind::TwoSoftEdges => ((u - v).max(a), (u + v).min(1.0)),
        RegimeKind::SoftHardMixed => ((u - v).max(a), 1.0),
        RegimeKind::TwoHardEdges => (a, 1.0),
    };
    Ok(SupportSpec {
        u,
        v,
        intervals: vec![interval],
    })
}

/// `x0 = (a^2 + 1 - x(a+1)) / (a-1)^2`, `x1 = sqrt(4a(x-a)(x-1)) / (a-1)^2`.
pub fn x0x1(x: f64, a: f64) -> Result<(f64, f64)> {
    if !(a < 0.0) {
        return Err(domain(format!("a = {a} must be negative")));
    }
    if !(x >= a && x <= 1.0) {
        return Err(domain(format!("x = {x} outside [{a}, 1] makes 4a(x-a)(x-1) negative")));
    }
    let d = (a - 1.0).powi(2);
    let x0 = (a * a + 1.0 - x * (a + 1.0)) / d;
    let x1 = (4.0 * a * (x - a) * (x - 1.0)).max(0.0).sqrt() / d;
    Ok((x0, x1))
}

/// How a piece of the support is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    /// Contains the arctan term; integrated numerically.
    Curved,
    /// `rho = 1 / (lambda |x|)`; integrated in closed form.
    Plateau,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub kind: PieceKind,
}

/// Evaluator for `rho^{(a)}` at fixed `(a, lambda)`.
#[derive(Debug, Clone)]
pub struct LimitingDensity {
    a: f64,
    lambda: f64,
    /// `a` folded into `[-1, 0)`.
    base_a: f64,
    mirrored: bool,
    one_minus_s: f64,
    u: f64,
    v: f64,
    regime: DensityRegime,
    /// Pieces in the original coordinates, ascending, sign-definite.
    pieces: Vec<Piece>,
}

impl LimitingDensity {
    pub fn new(a: f64, lambda: f64) -> Result<Self> {
        let (base_a, mirrored) = fold_parameter(a)?;
        let regime = regime(base_a, lambda)?;
        let sp = ScalingParams::new(base_a, lambda)?;
        let (s, one_minus_s) = (sp.s(), sp.one_minus_s());
        let (u, v) = u_v(base_a, s, one_minus_s);
        let (lo, hi) = ((u - v).max(base_a), (u + v).min(1.0));
        let mut base = Vec::new();
        if regime.kind == RegimeKind::TwoHardEdges && base_a < lo {
            base.push(Piece { lo: base_a, hi: lo, kind: PieceKind::Plateau });
        }
        if lo < 0.0 && 0.0 < hi {
            base.push(Piece { lo, hi: 0.0, kind: PieceKind::Curved });
            base.push(Piece { lo: 0.0, hi, kind: PieceKind::Curved });
        } else if lo < hi {
            base.push(Piece { lo, hi, kind: PieceKind::Curved });
        }
        if regime.kind != RegimeKind::TwoSoftEdges && hi < 1.0 {
            base.push(Piece { lo: hi, hi: 1.0, kind: PieceKind::Plateau });
        }
        let pieces = if mirrored {
            base.iter()
                .rev()
                .map(|p| Piece { lo: a * p.hi, hi: a * p.lo, kind: p.kind })
                .collect()
        } else {
            base
        };
        Ok(Self {
            a,
            lambda,
            base_a,
            mirrored,
            one_minus_s,
            u,
            v,
            regime,
            pieces,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Phase of the folded parameter.
    pub fn regime(&self) -> DensityRegime {
        self.regime
    }

    /// `(u, v)` of the folded parameter.
    pub fn u_v(&self) -> (f64, f64) {
        (self.u, self.v)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Support endpoints in the original coordinates.
    pub fn support(&self) -> (f64, f64) {
        (self.pieces[0].lo, self.pieces[self.pieces.len() - 1].hi)
    }

    /// Ends of `[a, 1]` where the density stays positive.
    pub fn hard_edges(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        let mut edges = Vec::new();
        if self.pieces[0].kind == PieceKind::Plateau {
            edges.push(lo);
        }
        if self.pieces[self.pieces.len() - 1].kind == PieceKind::Plateau {
            edges.push(hi);
        }
        edges
    }

    /// `arctan(sqrt(...)) / |x|` part of the density, for `x` in `(u-v, u+v)`.
    fn arctan_term(&self, x: f64) -> f64 {
        let a = self.base_a;
        let d = (a - 1.0).powi(2);
        let big_a = -2.0 * a + x * (a + 1.0);
        let root = (4.0 * a * (x - a) * (x - 1.0)).max(0.0).sqrt();
        let x0 = (a * a + 1.0 - x * (a + 1.0)) / d;
        let x1 = root / d;
        let upper = self.one_minus_s - x0 + x1;
        if upper <= 0.0 {
            return 0.0;
        }
        let lower = (x0 + x1 - self.one_minus_s).max(0.0);
        // 1 - x0 - x1 = x^2 / (A + R), so the arctan argument is (|x| w)^2.
        let w = (1.0 - a) / (big_a + root) * (upper / lower).sqrt();
        let ax = x.abs();
        let ratio = if w.is_infinite() {
            FRAC_PI_2 / ax
        } else if ax * w < 1e-8 {
            w * (1.0 - (ax * w).powi(2) / 3.0)
        } else {
            (ax * w).atan() / ax
        };
        2.0 / (PI * self.lambda) * ratio
    }

    fn base_value(&self, x: f64) -> f64 {
        let (lo, hi) = (self.u - self.v, self.u + self.v);
        let mut value = 0.0;
        if lo < x && x < hi {
            value += self.arctan_term(x);
        }
        let kind = self.regime.kind;
        let right_plateau = kind != RegimeKind::TwoSoftEdges && x >= hi && x <= 1.0;
        let left_plateau = kind == RegimeKind::TwoHardEdges && x >= self.base_a && x <= lo;
        if right_plateau || left_plateau {
            value += 1.0 / (self.lambda * x.abs());
        }
        value
    }

    /// `rho^{(a)}(x)`; zero off the support, one-sided limits at its ends.
    pub fn value(&self, x: f64) -> f64 {
        if !(x >= self.a && x <= 1.0) {
            return 0.0;
        }
        if self.mirrored {
            -self.base_value(x / self.a) / self.a
        } else {
            self.base_value(x)
        }
    }

    fn plateau_integral(&self, p: usize, lo: f64, hi: f64) -> f64 {
        let sign = if hi > 0.0 { 1.0 } else { -1.0 };
        if p == 0 {
            sign * (hi.abs().ln() - lo.abs().ln()) / self.lambda
        } else {
            let pi = p as i32;
            sign * (hi.powi(pi) - lo.powi(pi)) / (p as f64 * self.lambda)
        }
    }

    /// `∫_lo^hi x^p rho(x) dx`, each curved piece to absolute accuracy `tol`.
    fn weighted_mass(&self, p: usize, lo: f64, hi: f64, tol: f64) -> Result<f64> {
        let pi = p as i32;
        let mut total = 0.0;
        for piece in &self.pieces {
            let (l, h) = (piece.lo.max(lo), piece.hi.min(hi));
            if l >= h {
                continue;
            }
            total += match piece.kind {
                PieceKind::Plateau => self.plateau_integral(p, l, h),
                PieceKind::Curved => integrate_edges(|x| x.powi(pi) * self.value(x), l, h, tol)?.value,
            };
        }
        Ok(total)
    }

    /// `∫ g(x) rho(x) dx` over the support, numerically on every piece.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, tol: f64) -> Result<f64> {
        let mut total = 0.0;
        let share = tol / self.pieces.len() as f64;
        for piece in &self.pieces {
            total += integrate_edges(|x| g(x) * self.value(x), piece.lo, piece.hi, share)?.value;
        }
        Ok(total)
    }

    /// `∫_a^x rho`.
    pub fn cdf(&self, x: f64, tol: f64) -> Result<f64> {
        let share = tol / self.pieces.len() as f64;
        self.weighted_mass(0, f64::NEG_INFINITY, x, share)
    }

    /// The distribution function at each of the ascending points `xs`,
    /// accumulated segment by segment.
    pub fn cdf_sorted(&self, xs: &[f64], tol: f64) -> Result<Vec<f64>> {
        if xs.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(domain("cdf_sorted needs ascending input"));
        }
        let mut out = Vec::with_capacity(xs.len());
        let mut acc = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for &x in xs {
            acc += self.weighted_mass(0, prev, x, tol)?;
            out.push(acc);
            prev = x;
        }
        Ok(out)
    }

    /// `∫ x^p rho(x) dx`; plateaus exactly, curved pieces by quadrature.
    pub fn moment(&self, p: usize, tol: f64) -> Result<f64> {
        let share = tol / self.pieces.len() as f64;
        self.weighted_mass(p, f64::NEG_INFINITY, f64::INFINITY, share)
    }
}

/// `rho^{(a)}(x)` for any `a < 0`.
pub fn limiting_density(x: f64, a: f64, lambda: f64) -> Result<f64> {
    Ok(LimitingDensity::new(a, lambda)?.value(x))
}

pub fn density_cdf(x: f64, a: f64, lambda: f64, tol: f64) -> Result<f64> {
    LimitingDensity::new(a, lambda)?.cdf(x, tol)
}

pub fn density_moment(p: usize, a: f64, lambda: f64, tol: f64) -> Result<f64> {
    LimitingDensity::new(a, lambda)?.moment(p, tol)
}

/// Kolmogorov–Smirnov distance between the zeros of `U_N` at
/// `q = exp(-lambda/N)` and the limiting distribution.
pub fn zero_distribution_distance(a: f64, lambda: f64, n: usize) -> Result<f64> {
    if n < 10 {
        return Err(domain(format!("zero distribution study needs N >= 10, got {n}")));
    }
    let density = LimitingDensity::new(a, lambda)?;
    let z = zeros(&EnsembleParams::from_scaling(a, lambda, n)?);
    let cdf = density.cdf_sorted(&z, 1e-12)?;
    let nf = n as f64;
    Ok(cdf
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / nf).abs().max(((i + 1) as f64 / nf - f).abs()))
        .fold(0.0, f64::max))
}
