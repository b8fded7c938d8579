use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::moments::EnsembleParams;
use crate::qcore::QParams;

/// Absolute accuracy of the computed zeros.
pub const ZERO_TOL: f64 = 1e-12;

/// Symmetric tridiagonal matrix of the orthonormal recurrence:
/// diagonal `b_n = (a+1) q^n`, off-diagonal `a_n = sqrt(-a (1 - q^n) q^(n-1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(params: &EnsembleParams<f64>) -> Self {
        Self::build(params.qparams(), params.n())
    }

    /// The `n x n` truncation; `n = 0` is rejected.
    pub fn of_order(params: &QParams<f64>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("the Jacobi matrix needs N >= 1"));
        }
        Ok(Self::build(params, n))
    }

    fn build(params: &QParams<f64>, n: usize) -> Self {
        let (q, a) = (*params.q(), *params.a());
        let diag = (0..n).map(|k| (a + 1.0) * q.powi(k as i32)).collect();
        let offdiag = (1..n)
            .map(|k| (-a * (1.0 - q.powi(k as i32)) * q.powi(k as i32 - 1)).sqrt())
            .collect();
        Self { diag, offdiag }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of `T - x`).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for (k, &b) in self.diag.iter().enumerate() {
            let e2 = if k == 0 { 0.0 } else { self.offdiag[k - 1].powi(2) };
            d = (b - x) - if k == 0 { 0.0 } else { e2 / d };
            if d == 0.0 {
                d = -f64::MIN_POSITIVE;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// An interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let left = if k == 0 { 0.0 } else { self.offdiag[k - 1] };
            let right = if k + 1 == n { 0.0 } else { self.offdiag[k] };
            lo = lo.min(self.diag[k] - left - right);
            hi = hi.max(self.diag[k] + left + right);
        }
        (lo, hi)
    }

    /// All eigenvalues in ascending order, each by bisection on
    /// [`count_below`](Self::count_below) to absolute accuracy `tol`.
    pub fn eigenvalues(&self, tol: f64) -> Vec<f64> {
        if self.size() == 1 {
            return self.diag.clone();
        }
        let (lo0, hi0) = self.gershgorin();
        let pad = tol.max(f64::EPSILON * (lo0.abs().max(hi0.abs())));
        let (lo0, hi0) = (lo0 - pad, hi0 + pad);
        (0..self.size())
            .into_par_iter()
            .map(|k| {
                let (mut lo, mut hi) = (lo0, hi0);
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.count_below(mid) <= k {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }
}

pub fn jacobi_matrix(params: &EnsembleParams<f64>) -> JacobiMatrix {
    JacobiMatrix::new(params)
}

/// Zeros of `U_N`, ascending, to absolute accuracy [`ZERO_TOL`].
pub fn zeros(params: &EnsembleParams<f64>) -> Vec<f64> {
    JacobiMatrix::new(params).eigenvalues(ZERO_TOL)
}

/// Right-continuous empirical distribution function of a sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    points: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Fraction of points `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.points.partition_point(|&z| z <= x) as f64 / self.points.len() as f64
    }
}

pub fn empirical_zero_cdf(zeros: &[f64]) -> Result<EmpiricalCdf> {
    if zeros.is_empty() {
        return Err(domain("empirical CDF of an empty sample"));
    }
    if zeros.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(domain("empirical CDF needs sorted, finite input"));
    }
    Ok(EmpiricalCdf {
        points: zeros.to_vec(),
    })
}
