use std::collections::HashMap;

use crate::combinat::matching::{check_cap, eval_histogram, stat_histogram};
use crate::combinat::{EnumerationCaps, PrefixRule};
use crate::error::{Error, Result};
use crate::qcore::{pow_nonneg, qbinom, qdfact, qint, Scalar};

/// `H(b, c) = sum_{0 <= j_1 <= ... <= j_c <= b} prod_k [2 j_k + k - 2]!! / [2 j_k + k - 1]!!`.
pub fn h_sum<S: Scalar>(b: usize, c: usize, q: &S) -> S {
    h_sum_unchecked(b, c, q)
}

pub(crate) fn h_sum_unchecked<S: Scalar>(b: usize, c: usize, q: &S) -> S {
    if c == 0 {
        return S::one();
    }
    // ratio[m + 1] = [m]!! / [m + 1]!! for m >= -1.
    let top = 2 * b + c;
    let mut dfact: Vec<S> = Vec::with_capacity(top + 2);
    for m in -1..=top as i64 {
        dfact.push(qdfact(m, q));
    }
    let ratio: Vec<S> = (0..=top).map(|i| dfact[i].clone() / dfact[i + 1].clone()).collect();
    // Dynamic programming over the last index: row[j] is the sum over tuples
    // of the current length whose last entry is j.
    let mut row: Vec<S> = (0..=b).map(|j| ratio[2 * j].clone()).collect();
    for k in 2..=c {
        let mut prefix = S::zero();
        let mut next = Vec::with_capacity(b + 1);
        for (j, value) in row.iter().enumerate() {
            prefix = prefix + value.clone();
            next.push(prefix.clone() * ratio[2 * j + k - 1].clone());
        }
        row = next;
    }
    row.into_iter().sum()
}

fn check_alpha(n: usize, b: usize, c: usize) -> Result<()> {
    if n < 2 * b + c {
        return Err(Error::Domain(format!(
            "alpha({n}, {b}, {c}) requires n >= 2b + c"
        )));
    }
    Ok(())
}

/// `qbinom(n, 2b+c) [2b+c-1]!! H(b, c)`.
pub fn alpha_closed<S: Scalar>(n: usize, b: usize, c: usize, q: &S) -> Result<S> {
    check_alpha(n, b, c)?;
    let m = 2 * b + c;
    Ok(qbinom(n, m, q) * qdfact(m as i64 - 1, q) * h_sum_unchecked(b, c, q))
}

/// Direct sum of `q^stat` over `Mat_{n,b,c}`.
pub fn alpha_bruteforce<S: Scalar>(
    n: usize,
    b: usize,
    c: usize,
    q: &S,
    caps: &EnumerationCaps,
) -> Result<S> {
    check_alpha(n, b, c)?;
    check_cap(n, caps)?;
    let hist = stat_histogram(n, b, c, PrefixRule::None, caps)?;
    Ok(eval_histogram(&hist, q))
}

/// `alpha(n,b,c) = q^(2b+c) alpha(n-1,b,c) + [n-1] alpha(n-2,b-1,c) + alpha(n-1,b,c-1)`,
/// with `alpha(0,0,0) = 1` and `alpha = 0` whenever `n < 2b + c`.
pub fn alpha_recurrence<S: Scalar>(n: usize, b: usize, c: usize, q: &S) -> Result<S> {
    check_alpha(n, b, c)?;
    let mut memo = HashMap::new();
    Ok(alpha_memo(n, b, c, q, &mut memo))
}

fn alpha_memo<S: Scalar>(
    n: usize,
    b: usize,
    c: usize,
    q: &S,
    memo: &mut HashMap<(usize, usize, usize), S>,
) -> S {
    if n < 2 * b + c {
        return S::zero();
    }
    if n == 0 {
        return S::one();
    }
    if let Some(v) = memo.get(&(n, b, c)) {
        return v.clone();
    }
    let mut v = pow_nonneg(q, 2 * b + c) * alpha_memo(n - 1, b, c, q, memo);
    if b > 0 {
        v = v + qint(n - 1, q) * alpha_memo(n - 2, b - 1, c, q, memo);
    }
    if c > 0 {
        v = v + alpha_memo(n - 1, b, c - 1, q, memo);
    }
    memo.insert((n, b, c), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ExactScalar;

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d).unwrap()
    }

    /// Literal tuple enumeration of `H`.
    fn h_tuples(b: usize, c: usize, q: &ExactScalar) -> ExactScalar {
        fn rec(k: usize, lo: usize, b: usize, c: usize, q: &ExactScalar, acc: ExactScalar) -> ExactScalar {
            if k > c {
                return acc;
            }
            (lo..=b)
                .map(|j| {
                    let m = (2 * j + k) as i64;
                    let factor = qdfact(m - 2, q) / qdfact(m - 1, q);
                    rec(k + 1, j, b, c, q, acc.clone() * factor)
                })
                .sum()
        }
        rec(1, 0, b, c, q, ExactScalar::one())
    }

    #[test]
    fn h_examples() {
        let q = r(2, 5);
        let one = ExactScalar::one();
        assert_eq!(h_sum(5, 0, &q), one);
        assert_eq!(h_sum(0, 3, &q), one.clone() / (one.clone() + q.clone()));
        assert_eq!(h_sum(1, 1, &q), one.clone() + one.clone() / (one + q.clone()));
        for c in 0..=6 {
            assert_eq!(h_sum(0, c, &q), ExactScalar::one() / qdfact(c as i64 - 1, &q));
        }
    }

    #[test]
    fn h_dp_matches_tuple_sum() {
        let q = r(3, 7);
        for b in 0..=4 {
            for c in 0..=5 {
                assert_eq!(h_sum(b, c, &q), h_tuples(b, c, &q), "b={b} c={c}");
            }
        }
    }

    #[test]
    fn alpha_examples() {
        let q = r(1, 3);
        let caps = EnumerationCaps::default();
        let one = ExactScalar::one();
        for f in [
            alpha_closed(2, 1, 0, &q).unwrap(),
            alpha_recurrence(2, 1, 0, &q).unwrap(),
            alpha_bruteforce(2, 1, 0, &q, &caps).unwrap(),
            alpha_closed(1, 0, 1, &q).unwrap(),
            alpha_bruteforce(1, 0, 1, &q, &caps).unwrap(),
        ] {
            assert_eq!(f, one);
        }
        let expected = one + q.clone() + q.clone() * q.clone();
        assert_eq!(alpha_bruteforce(3, 1, 0, &q, &caps).unwrap(), expected);
        assert_eq!(alpha_closed(3, 1, 0, &q).unwrap(), expected);
    }

    #[test]
    fn three_routes_agree() {
        let caps = EnumerationCaps::default();
        for q in [r(1, 2), r(2, 3)] {
            for n in 0..=8 {
                for b in 0..=n / 2 {
                    for c in 0..=n - 2 * b {
                        let closed = alpha_closed(n, b, c, &q).unwrap();
                        assert_eq!(closed, alpha_recurrence(n, b, c, &q).unwrap());
                        assert_eq!(closed, alpha_bruteforce(n, b, c, &q, &caps).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn preconditions() {
        let q = r(1, 2);
        assert!(alpha_closed(2, 1, 1, &q).is_err());
        assert!(alpha_recurrence(2, 1, 1, &q).is_err());
        let err = alpha_bruteforce(11, 0, 0, &q, &EnumerationCaps::default()).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
    }
}
