//! Weighted Motzkin paths and generalised matchings: the brute-force side of
//! the moment identities.
//!
//! Enumeration orders are fixed so that a failing case can be reported by
//! index and reproduced. Both enumerators refuse inputs beyond the sizes in
//! [`EnumerationCaps`], since the sets grow exponentially.

mod alpha;
mod matching;
mod motzkin;

pub use alpha::{alpha_bruteforce, alpha_closed, alpha_recurrence, h_sum};
pub(crate) use alpha::h_sum_unchecked;
pub use matching::{
    enumerate_matchings, for_each_matching, moment_component_via_matching,
    moment_component_via_matching_with, stat, stat_histogram, GeneralizedMatching, PrefixRule,
    VertexRole,
};
pub use motzkin::{
    enumerate_motzkin, for_each_motzkin, moment_via_motzkin, moment_via_motzkin_with,
    path_weight, weighted_path_sum, MotzkinPath, Step,
};

use crate::qcore::{qint, pow_nonneg, QParams, Scalar};

/// Size limits for the exhaustive enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    /// Longest Motzkin path that will be enumerated.
    pub max_path_length: usize,
    /// Largest vertex count for matching enumeration.
    pub max_matching_vertices: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self {
            max_path_length: 14,
            max_matching_vertices: 10,
        }
    }
}

type WeightFn<S> = Box<dyn Fn(usize) -> S + Send + Sync>;

/// Step weights of a three-term recurrence `P_{n+1} = (x - b_n) P_n - lam_n P_{n-1}`.
pub struct WeightSequences<S> {
    b: WeightFn<S>,
    lam: WeightFn<S>,
}

impl<S: Scalar> WeightSequences<S> {
    pub fn new(
        b: impl Fn(usize) -> S + Send + Sync + 'static,
        lam: impl Fn(usize) -> S + Send + Sync + 'static,
    ) -> Self {
        Self {
            b: Box::new(b),
            lam: Box::new(lam),
        }
    }

    pub fn b(&self, n: usize) -> S {
        (self.b)(n)
    }

    pub fn lam(&self, n: usize) -> S {
        (self.lam)(n)
    }

    /// Monic Al-Salam–Carlitz coefficients `b_n = (a+1) q^n`,
    /// `lam_n = -a q^(n-1) (1 - q^n)`. Rational whenever `q` and `a` are.
    pub fn al_salam_carlitz(params: &QParams<S>) -> Self {
        let q = params.q().clone();
        let a = params.a().clone();
        let q2 = q.clone();
        let a2 = a.clone();
        Self::new(
            move |n| (a.clone() + S::one()) * pow_nonneg(&q, n),
            move |n| {
                if n == 0 {
                    S::zero()
                } else {
                    -a2.clone() * pow_nonneg(&q2, n - 1) * (S::one() - pow_nonneg(&q2, n))
                }
            },
        )
    }
}

impl WeightSequences<f64> {
    /// Coefficients of the rescaled polynomials `(1-q)^(-n/2) U_n(sqrt(1-q) x)`:
    /// `b_n = (a+1) q^n / sqrt(1-q)`, `lam_n = -a q^(n-1) [n]_q`.
    pub fn al_salam_carlitz_rescaled(params: &QParams<f64>) -> Self {
        let q = *params.q();
        let a = *params.a();
        Self::new(
            move |n| (a + 1.0) * q.powi(n as i32) / (1.0 - q).sqrt(),
            move |n| {
                if n == 0 {
                    0.0
                } else {
                    -a * q.powi(n as i32 - 1) * qint(n, &q)
                }
            },
        )
    }
}
