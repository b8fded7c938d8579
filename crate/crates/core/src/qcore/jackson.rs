//! Jackson q-integration over the bilateral lattice `{q^k} ∪ {a q^k}`.

use std::collections::VecDeque;

use crate::error::{domain, Error, Result};

const MAX_LATTICE_POINTS: usize = 50_000_000;
const TAIL_SAFETY: f64 = 10.0;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sliding maximum of `|f|` over the last `width` lattice points.
struct WindowMax {
    width: usize,
    items: VecDeque<(usize, f64)>,
}

impl WindowMax {
    fn new(width: usize) -> Self {
        Self {
            width,
            items: VecDeque::new(),
        }
    }

    fn push(&mut self, index: usize, value: f64) {
        while self.items.back().is_some_and(|&(_, v)| v <= value) {
            self.items.pop_back();
        }
        self.items.push_back((index, value));
        while self.items.front().is_some_and(|&(i, _)| i + self.width <= index) {
            self.items.pop_front();
        }
    }

    fn max(&self) -> f64 {
        self.items.front().map_or(0.0, |&(_, v)| v)
    }
}

/// `(1 - q) sum_{k >= 0} endpoint q^k f(endpoint q^k)`, i.e. `∫_0^endpoint f d_qx`.
fn one_sided<F: Fn(f64) -> f64>(
    f: &F,
    endpoint: f64,
    q: f64,
    tol: f64,
    bound: Option<f64>,
) -> Result<f64> {
    // One "decade" of lattice points: x shrinks by a factor of 10.
    let decade = ((10f64.ln() / -q.ln()).ceil() as usize).max(1);
    let mut window = WindowMax::new(decade);
    let mut sum = CompensatedSum::default();
    let mut x = endpoint;
    for k in 0..MAX_LATTICE_POINTS {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NonFinite { point: x, value: fx });
        }
        sum.add(x * fx);
        window.push(k, fx.abs());
        x *= q;
        if k + 1 >= decade {
            let sup = bound.unwrap_or_else(|| TAIL_SAFETY * window.max());
            // sum_{m > k} (1 - q) |x_m| |f| <= |endpoint| q^{k+1} sup
            if x.abs() * sup < tol {
                return Ok((1.0 - q) * sum.value());
            }
        }
    }
    Err(Error::Truncation {
        terms: MAX_LATTICE_POINTS,
    })
}

fn check_args(a: f64, q: f64, tol: f64) -> Result<()> {
    if !(a < 0.0) {
        return Err(domain(format!("Jackson integral needs a < 0, got a = {a}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(domain(format!("Jackson integral needs 0 < q < 1, got q = {q}")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("truncation tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// `∫_a^1 f(x) d_qx = ∫_0^1 f d_qx - ∫_0^a f d_qx`.
///
/// The lattice sums are truncated once the geometric tail, bounded with ten
/// times the largest `|f|` over the last retained decade of points, falls
/// below `trunc_tol`.
pub fn jackson_integral<F: Fn(f64) -> f64>(f: F, a: f64, q: f64, trunc_tol: f64) -> Result<f64> {
    check_args(a, q, trunc_tol)?;
    let right = one_sided(&f, 1.0, q, 0.5 * trunc_tol, None)?;
    let left = one_sided(&f, a, q, 0.5 * trunc_tol, None)?;
    Ok(right - left)
}

/// As [`jackson_integral`], with a caller-supplied bound on `|f|` near zero
/// used for the tail estimate.
pub fn jackson_integral_with_bound<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    q: f64,
    trunc_tol: f64,
    sup_near_zero: f64,
) -> Result<f64> {
    check_args(a, q, trunc_tol)?;
    if !(sup_near_zero >= 0.0) {
        return Err(domain("bound on |f| must be nonnegative"));
    }
    let right = one_sided(&f, 1.0, q, 0.5 * trunc_tol, Some(sup_near_zero))?;
    let left = one_sided(&f, a, q, 0.5 * trunc_tol, Some(sup_near_zero))?;
    Ok(right - left)
}
