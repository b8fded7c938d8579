//! Numeric command-line arguments: `p/q` rationals, decimals and `log(x)`.

use std::fmt;
use std::str::FromStr;

use qensemble::qcore::ExactScalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Rational(ExactScalar),
    Real(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Rational(r) => r.to_f64(),
            Number::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&ExactScalar> {
        match self {
            Number::Rational(r) => Some(r),
            Number::Real(_) => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rational(r) => write!(f, "{r}"),
            Number::Real(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Number {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        for prefix in ["log(", "ln("] {
            if let Some(inner) = s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) {
                let x = inner.parse::<Number>()?.to_f64();
                if !(x > 0.0) {
                    return Err(format!("log argument must be positive, got {inner}"));
                }
                return Ok(Number::Real(x.ln()));
            }
        }
        let integer_like = |t: &str| {
            let t = t.trim().strip_prefix('-').unwrap_or(t.trim());
            !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
        };
        let rational = match s.split_once('/') {
            Some((n, d)) => integer_like(n) && integer_like(d),
            None => integer_like(s),
        };
        if rational {
            return s.parse::<ExactScalar>().map(Number::Rational).map_err(|e| e.to_string());
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Number::Real(x)),
            _ => Err(format!("`{s}` is not a number (use p/q, a decimal, or log(x))")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!("1/2".parse::<Number>().unwrap(), Number::Rational(ExactScalar::new(1, 2).unwrap()));
        assert_eq!("-3".parse::<Number>().unwrap(), Number::Rational(ExactScalar::integer(-3)));
        assert_eq!("0.25".parse::<Number>().unwrap(), Number::Real(0.25));
        assert_eq!("log(2)".parse::<Number>().unwrap(), Number::Real(2f64.ln()));
        assert_eq!("log(4/3)".parse::<Number>().unwrap().to_f64(), (4.0f64 / 3.0).ln());
        assert!("1/0".parse::<Number>().is_err());
        assert!("abc".parse::<Number>().is_err());
        assert!("log(-1)".parse::<Number>().is_err());
        assert!("inf".parse::<Number>().is_err());
    }
}
