//! Exact rational helpers shared by the arena format, the evaluators and the CLI.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational used for every probability, reward and value.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("'{0}' looks like a floating point literal; write it as num/den")]
    Float(String),
    #[error("'{0}' is not a rational of the form num/den")]
    Malformed(String),
    #[error("'{0}' has a zero denominator")]
    ZeroDenominator(String),
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or a bare integer `"n"`. Floats are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(RationalParseError::Empty);
    }
    if t.contains(['.', 'e', 'E']) || t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("nan") {
        return Err(RationalParseError::Float(t.to_string()));
    }
    let parse_int = |s: &str| -> Result<BigInt, RationalParseError> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalParseError::Malformed(t.to_string()));
        }
        s.parse::<BigInt>()
            .map_err(|_| RationalParseError::Malformed(t.to_string()))
    };
    match t.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(t)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(RationalParseError::ZeroDenominator(t.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders a rational as `num/den`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn in_unit_interval(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -3/6 ").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("+4/2").unwrap(), int(2));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        assert!(matches!(parse_rational("0.5"), Err(RationalParseError::Float(_))));
        assert!(matches!(parse_rational("1e3"), Err(RationalParseError::Float(_))));
        assert!(matches!(parse_rational("1/0"), Err(RationalParseError::ZeroDenominator(_))));
        assert!(matches!(parse_rational("a/b"), Err(RationalParseError::Malformed(_))));
        assert!(matches!(parse_rational("1/-"), Err(RationalParseError::Malformed(_))));
        assert!(matches!(parse_rational(""), Err(RationalParseError::Empty)));
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&ratio(-2, 4)), "-1/2");
    }
}
