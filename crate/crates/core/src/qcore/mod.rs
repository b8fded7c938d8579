//! Exact rational arithmetic and the q-calculus primitives.

mod exact;
mod jackson;
mod qfunc;
mod scalar;

pub use exact::ExactScalar;
pub use jackson::{jackson_integral, jackson_integral_with_bound};
pub(crate) use jackson::CompensatedSum;
pub use qfunc::{
    log_q_pochhammer_infinite, q_binomial, q_double_factorial, q_factorial, q_int,
    q_pochhammer_finite, q_pochhammer_infinite, LogProduct, QParams,
};
pub(crate) use qfunc::{qbinom, qdfact, qfact, qint, qpow, q_shifted_factorial};
pub use scalar::Scalar;
pub(crate) use scalar::pow_nonneg;
