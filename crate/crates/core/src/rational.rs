//! Exact rational helpers. Every threshold comparison in the crate goes
//! through `Rational`; floating point only appears in reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"3"`, `"-1/4"`, `"0.125"` or `"2.5e-3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Input(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators and denominators overflow f64 separately.
        let lg = log10_abs(r);
        let mag = 10f64.powf(lg);
        if r.is_negative() {
            -mag
        } else {
            mag
        }
    })
}

/// Base-10 logarithm of |r|; works for values far outside f64 range.
pub fn log10_abs(r: &Rational) -> f64 {
    fn log10_big(b: &BigInt) -> f64 {
        let digits = b.abs().to_string();
        let lead: f64 = digits[..digits.len().min(15)].parse().unwrap_or(1.0);
        lead.log10() + (digits.len() - digits.len().min(15)) as f64
    }
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    log10_big(r.numer()) - log10_big(r.denom())
}

pub fn ceil_big(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Ceiling clamped into `usize`; negative values give 0.
pub fn ceil_usize(r: &Rational) -> usize {
    let c = ceil_big(r);
    if c.is_negative() {
        0
    } else {
        c.to_usize().unwrap_or(usize::MAX)
    }
}

pub fn floor_usize(r: &Rational) -> usize {
    let f = r.floor().to_integer();
    if f.is_negative() {
        0
    } else {
        f.to_usize().unwrap_or(usize::MAX)
    }
}

pub fn min_rat(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Exact rational reduced to an `i128` fraction, for hot integer loops.
pub fn as_i128_pair(r: &Rational) -> Option<(i128, i128)> {
    let reduced = r.reduced();
    Some((reduced.numer().to_i128()?, reduced.denom().to_i128()?))
}

pub fn is_positive(r: &Rational) -> bool {
    r > &Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn gcd_usize(a: usize, b: usize) -> usize {
    a.gcd(&b)
}

/// Serde adapter writing rationals as `"p/q"` strings and accepting
/// strings or JSON numbers on input.
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
        Float(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t).map_err(de::Error::custom),
            Raw::Int(i) => Ok(Rational::from_integer(BigInt::from(i))),
            Raw::Float(f) => parse_rational(&f.to_string()).map_err(de::Error::custom),
        }
    }

    pub mod map {
        use super::*;
        use std::collections::BTreeMap;

        pub fn serialize<S: Serializer>(m: &BTreeMap<String, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_map(m.iter().map(|(k, v)| (k, v.to_string())))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<BTreeMap<String, Rational>, D::Error> {
            BTreeMap::<String, Raw>::deserialize(d)?
                .into_iter()
                .map(|(k, raw)| {
                    let v = match raw {
                        Raw::Text(t) => parse_rational(&t).map_err(de::Error::custom)?,
                        Raw::Int(i) => Rational::from_integer(BigInt::from(i)),
                        Raw::Float(f) => parse_rational(&f.to_string()).map_err(de::Error::custom)?,
                    };
                    Ok((k, v))
                })
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match r {
                Some(v) => s.serialize_str(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
            match Option::<Raw>::deserialize(d)? {
                None => Ok(None),
                Some(Raw::Text(t)) => parse_rational(&t).map(Some).map_err(de::Error::custom),
                Some(Raw::Int(i)) => Ok(Some(Rational::from_integer(BigInt::from(i)))),
                Some(Raw::Float(f)) => parse_rational(&f.to_string()).map(Some).map_err(de::Error::custom),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_fraction_and_exponent_forms() {
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), rat(1, 400));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn log10_handles_tiny_values() {
        let tiny = pow(&rat(1, 1000), 400);
        assert!((log10_abs(&tiny) + 1200.0).abs() < 1e-9);
        assert_eq!(to_f64(&tiny), 0.0);
    }

    #[test]
    fn ceil_and_floor_clamp() {
        assert_eq!(ceil_usize(&rat(22, 10)), 3);
        assert_eq!(ceil_usize(&rat(-5, 2)), 0);
        assert_eq!(floor_usize(&rat(22, 10)), 2);
    }
}
