//! Spectral analysis of the q-deformed Al-Salam–Carlitz unitary ensemble.
//!
//! - [`moments`]: exact or floating-point spectral moments `m_{N,p}` from a
//!   closed triple sum.
//! - [`combinat`]: the same moments from weighted Motzkin paths and from a
//!   statistic on generalised matchings.
//! - [`orthopoly`]: the polynomials, their weight, Jacobi matrices and zeros.
//! - [`asymptotics`]: coefficients of the large-N expansion under `q = exp(-lambda/N)`.
//! - [`density`]: the limiting density, its phases and Stieltjes transform.
//! - [`verify`]: the acceptance checks shared by the test suite and the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod combinat;
pub mod density;
pub mod error;
pub mod moments;
pub mod orthopoly;
pub mod qcore;
pub mod verify;

pub use error::{Error, Result};
