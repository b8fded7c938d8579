//! Al-Salam–Carlitz polynomials, their weight, the finite-N one-point
//! density and the zeros of `U_N`.

mod jacobi;

pub use jacobi::{empirical_zero_cdf, jacobi_matrix, zeros, EmpiricalCdf, JacobiMatrix};

use std::cell::RefCell;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::moments::EnsembleParams;
use crate::qcore::{
    jackson_integral, log_q_pochhammer_infinite, pow_nonneg, q_shifted_factorial, CompensatedSum,
    QParams, Scalar,
};

/// Relative accuracy used for the infinite products inside the Jackson routes.
const PRODUCT_TOL: f64 = 1e-16;

/// Monic `U_n(x)` from `U_{n+1} = (x - (a+1) q^n) U_n + a q^(n-1) (1 - q^n) U_{n-1}`.
pub fn u_poly<S: Scalar>(n: usize, x: &S, params: &QParams<S>) -> S {
    let (q, a) = (params.q(), params.a());
    let one = S::one();
    let mut prev = S::zero();
    let mut cur = one.clone();
    let mut qn = one.clone();
    for k in 0..n {
        let b = (a.clone() + one.clone()) * qn.clone();
        let next = if k == 0 {
            (x.clone() - b) * cur.clone()
        } else {
            let lam = -a.clone() * (qn.clone() / q.clone()) * (one.clone() - qn.clone());
            (x.clone() - b) * cur.clone() - lam * prev.clone()
        };
        prev = cur;
        cur = next;
        qn = qn * q.clone();
    }
    cur
}

/// `h_n = (-a)^n (1-q) (q;q)_n q^(n(n-1)/2)`, so that `∫ U_m U_n w d_qx = h_n δ_{mn}`.
pub fn norm_squared<S: Scalar>(n: usize, params: &QParams<S>) -> S {
    let (q, a) = (params.q(), params.a());
    pow_nonneg(&(-a.clone()), n)
        * (S::one() - q.clone())
        * q_shifted_factorial(q, n)
        * pow_nonneg(q, n * n.saturating_sub(1) / 2)
}

/// The orthogonality weight `w(x) = (qx, qx/a; q)_inf / (q, a, q/a; q)_inf`
/// with its normalising constant computed once.
#[derive(Debug, Clone)]
pub struct AlSalamWeight {
    q: f64,
    a: f64,
    tol: f64,
    ln_norm: f64,
}

impl AlSalamWeight {
    pub fn new(params: &QParams<f64>, tol: f64) -> Result<Self> {
        let (q, a) = (*params.q(), *params.a());
        let ln_norm = log_q_pochhammer_infinite(q, q, tol)?.ln_abs
            + log_q_pochhammer_infinite(a, q, tol)?.ln_abs
            + log_q_pochhammer_infinite(q / a, q, tol)?.ln_abs;
        Ok(Self { q, a, tol, ln_norm })
    }

    /// `ln (q, a, q/a; q)_inf`.
    pub fn ln_norm(&self) -> f64 {
        self.ln_norm
    }

    fn check(&self, x: f64) -> Result<()> {
        if x >= self.a && x <= 1.0 {
            Ok(())
        } else {
            Err(domain(format!("x = {x} lies outside [{}, 1]", self.a)))
        }
    }

    /// `ln (qx, qx/a; q)_inf`; both products are positive on `[a, 1]`.
    pub fn ln_numerator(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        let (q, a) = (self.q, self.a);
        Ok(log_q_pochhammer_infinite(q * x, q, self.tol)?.ln_abs
            + log_q_pochhammer_infinite(q * x / a, q, self.tol)?.ln_abs)
    }

    pub fn ln_value(&self, x: f64) -> Result<f64> {
        Ok(self.ln_numerator(x)? - self.ln_norm)
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.ln_value(x)?.exp())
    }
}

/// `w(x)` on `[a, 1]`; the endpoints are lattice points and are accepted.
pub fn weight(x: f64, params: &QParams<f64>, tol: f64) -> Result<f64> {
    AlSalamWeight::new(params, tol)?.value(x)
}

/// Evaluator for `rho_N(x) = sum_{j<N} U_j(x)^2 / h_j * w(x)`.
#[derive(Debug, Clone)]
pub struct FiniteDensity {
    params: EnsembleParams<f64>,
    weight: AlSalamWeight,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

const RESCALE_HIGH: f64 = 1e150;
const RESCALE_LOW: f64 = 1e-150;

impl FiniteDensity {
    pub fn new(params: &EnsembleParams<f64>, tol: f64) -> Result<Self> {
        let weight = AlSalamWeight::new(params.qparams(), tol)?;
        let jm = JacobiMatrix::new(params);
        Ok(Self {
            params: params.clone(),
            weight,
            diag: jm.diag().to_vec(),
            offdiag: jm.offdiag().to_vec(),
        })
    }

    pub fn params(&self) -> &EnsembleParams<f64> {
        &self.params
    }

    /// Evaluates the sum through the orthonormal recurrence
    /// `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}`, carrying the
    /// magnitude in a separate log scale so that no term overflows.
    pub fn value(&self, x: f64) -> Result<f64> {
        let ln_w = self.weight.ln_value(x)?;
        let q = *self.params.q();
        let n = self.params.n();
        let mut ln_scale = 0.0;
        let mut prev = 0.0;
        let mut cur = 1.0 / (1.0 - q).sqrt();
        let mut sum = 0.0;
        for k in 0..n {
            sum += cur * cur;
            if k + 1 == n {
                break;
            }
            let back = if k == 0 { 0.0 } else { self.offdiag[k - 1] * prev };
            let next = ((x - self.diag[k]) * cur - back) / self.offdiag[k];
            prev = cur;
            cur = next;
            let m = cur.abs().max(prev.abs());
            if m > RESCALE_HIGH || (m < RESCALE_LOW && m > 0.0) {
                prev /= m;
                cur /= m;
                sum /= m * m;
                ln_scale += m.ln();
            }
        }
        if sum == 0.0 {
            return Ok(0.0);
        }
        let value = (sum.ln() + 2.0 * ln_scale + ln_w).exp();
        if !value.is_finite() {
            return Err(Error::Overflow(format!("density at x = {x}")));
        }
        Ok(value)
    }
}

/// `rho_N(x)` for `x` in `[a, 1]`.
pub fn density_n(x: f64, params: &EnsembleParams<f64>, tol: f64) -> Result<f64> {
    FiniteDensity::new(params, tol)?.value(x)
}

/// Runs a Jackson integral over a fallible integrand, surfacing the first
/// integrand error instead of the generic non-finite report.
fn jackson_fallible<F: Fn(f64) -> Result<f64>>(f: F, a: f64, q: f64, tol: f64) -> Result<f64> {
    let failure = RefCell::new(None);
    let result = jackson_integral(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        a,
        q,
        tol,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => result,
    }
}

/// `∫_a^1 x^p rho_N(x) d_qx`.
pub fn jackson_moment(params: &EnsembleParams<f64>, p: usize, tol: f64) -> Result<f64> {
    let density = FiniteDensity::new(params, PRODUCT_TOL)?;
    let exp = p as i32;
    jackson_fallible(
        |x| Ok(x.powi(exp) * density.value(x)?),
        *params.a(),
        *params.q(),
        tol,
    )
}

/// Orthogonality defect returned by [`orthogonality_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityResidual {
    /// `∫ (qx, qx/a; q)_inf U_m U_n d_qx` minus the closed-form right-hand side.
    pub residual: f64,
    /// `sqrt(h_m h_n) (q, a, q/a; q)_inf`, the natural size of either side.
    pub scale: f64,
}

/// Compares `∫_a^1 (qx, qx/a; q)_inf U_m U_n d_qx` with
/// `(-a)^n (1-q) (q;q)_n (q, a, q/a; q)_inf q^(n(n-1)/2) δ_{mn}`.
pub fn orthogonality_check(
    m: usize,
    n: usize,
    params: &QParams<f64>,
    tol: f64,
) -> Result<OrthogonalityResidual> {
    let weight = AlSalamWeight::new(params, PRODUCT_TOL)?;
    let norm = weight.ln_norm().exp();
    let integral = jackson_fallible(
        |x| Ok(weight.ln_numerator(x)?.exp() * u_poly(m, &x, params) * u_poly(n, &x, params)),
        *params.a(),
        *params.q(),
        tol,
    )?;
    let rhs = if m == n {
        norm_squared(n, params) * norm
    } else {
        0.0
    };
    let scale = (norm_squared(m, params) * norm_squared(n, params)).sqrt() * norm;
    Ok(OrthogonalityResidual {
        residual: integral - rhs,
        scale,
    })
}

/// Finite-N density sampled on a grid.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    pub params: EnsembleParams<f64>,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Jackson weights when the grid is the integration lattice itself.
    lattice_weights: Option<Vec<f64>>,
}

impl DensityProfile {
    /// Evaluates `rho_N` at every grid point (sorted on output).
    pub fn on_grid(params: &EnsembleParams<f64>, grid: &[f64], tol: f64) -> Result<Self> {
        let density = FiniteDensity::new(params, tol)?;
        let mut grid = grid.to_vec();
        grid.sort_by(f64::total_cmp);
        let values = grid
            .par_iter()
            .map(|&x| density.value(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: params.clone(),
            grid,
            values,
            lattice_weights: None,
        })
    }

    /// Samples the lattice `{q^k} ∪ {a q^k}` down to `|x| >= cutoff`.
    pub fn on_lattice(params: &EnsembleParams<f64>, cutoff: f64, tol: f64) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff < 1.0) {
            return Err(domain(format!("cutoff {cutoff} must lie in (0, 1)")));
        }
        let (q, a) = (*params.q(), *params.a());
        let mut points = Vec::new();
        for endpoint in [1.0, a] {
            let mut x = endpoint;
            while x.abs() >= cutoff {
                // Jackson weight (1 - q)|x|: the left sum enters with a minus sign.
                points.push((x, (1.0 - q) * x.abs()));
                x *= q;
            }
        }
        points.sort_by(|l, r| l.0.total_cmp(&r.0));
        let grid: Vec<f64> = points.iter().map(|p| p.0).collect();
        let mut profile = Self::on_grid(params, &grid, tol)?;
        profile.lattice_weights = Some(points.into_iter().map(|p| p.1).collect());
        Ok(profile)
    }

    /// Jackson sum of the sampled values; `None` unless built on the lattice.
    pub fn lattice_mass(&self) -> Option<f64> {
        let weights = self.lattice_weights.as_ref()?;
        let mut sum = CompensatedSum::default();
        for (w, v) in weights.iter().zip(&self.values) {
            sum.add(w * v);
        }
        Some(sum.value())
    }
}
