//! Exact rational scalars. Every solver coefficient lives here; floating
//! point only appears at final evaluation and inside the simulator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision fraction, kept in lowest terms with positive
/// denominator by construction.
pub type Rational = BigRational;

/// Shorthand for small fractions.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for integers.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// n! as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    (2..=n as u64).fold(BigInt::one(), |acc, i| acc * i)
}

/// Nearest IEEE double.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses either an exact fraction `a/b` or a decimal literal.
///
/// Decimals convert through their exact base-10 expansion, so `0.35`
/// becomes 7/20 with no binary rounding on the way in.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidNumber(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(|_| bad())?;
        let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(numer, denom));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mantissa: BigInt = format!("{}{}", int_part, frac_part).parse().map_err(|_| bad())?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(Rational::new(mantissa * sign, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fraction() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" 9/10 ").unwrap(), rat(9, 10));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
    }

    #[test]
    fn parse_decimal_is_exact_base10() {
        assert_eq!(parse_rational("0.35").unwrap(), rat(7, 20));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(".25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("2").unwrap(), rat_int(2));
        assert_eq!(parse_rational("-0.1").unwrap(), rat(-1, 10));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "1e-3", "--2"] {
            assert!(parse_rational(s).is_err(), "{s} should not parse");
        }
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(1), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(10), BigInt::from(3_628_800));
    }
}
