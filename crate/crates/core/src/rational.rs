//! Exact rational numbers used for every threshold comparison.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Parses `"3"`, `"-2/7"` or a finite decimal such as `"0.125"` into an
/// exact fraction.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::param(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = int_part
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        let value = Rational::new(magnitude, scale);
        return Ok(if negative { -value } else { value });
    }
    let value: i64 = text.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(value))
}

/// Serializes a rational as its `a/b` string form.
pub fn serialize<S: serde::Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn serialize_opt<S: serde::Serializer>(value: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact `count / total`, or zero when `total` is zero.
pub fn ratio_u128(count: u128, total: u128) -> Rational {
    if total.is_zero() {
        return Rational::zero();
    }
    let g = gcd(count, total);
    let (num, den) = (count / g, total / g);
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(num), Ok(den)) => Rational::new(num, den),
        // Astronomically large counts: fall back to the nearest representable ratio.
        _ => Rational::approximate_float(num as f64 / den as f64).unwrap_or_else(Rational::zero),
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn ratio_of_counts_is_reduced() {
        assert_eq!(ratio_u128(10, 15), Rational::new(2, 3));
        assert_eq!(ratio_u128(0, 0), Rational::zero());
    }
}
