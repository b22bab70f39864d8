//! Exact rational arithmetic helpers.
//!
//! Every threshold in this crate is an exact rational; floating point only
//! appears in geometry and in decimal renderings that always travel next to
//! the exact value.

use num::bigint::BigInt;
use num::{BigRational, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// The exact rational type used throughout the crate.
pub type Ratio = BigRational;

pub fn int(v: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_usize(v: usize) -> Ratio {
    Ratio::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Closest rational to `x` with the given denominator; used to pin
/// float-provided parameters to exact values.
pub fn from_f64_approx(x: f64, den: i64) -> Ratio {
    let num = (x * den as f64).round() as i64;
    frac(num, den)
}

/// `round(r)` with halves away from zero, as an integer.
pub fn round_half_away(r: &Ratio) -> BigInt {
    let trunc = r.trunc().to_integer();
    let frac2 = (r.fract() * int(2)).abs();
    if frac2 >= int(1) {
        if r.is_negative() {
            trunc - 1
        } else {
            trunc + 1
        }
    } else {
        trunc
    }
}

/// Serialisable rendering of a rational: exact numerator/denominator strings
/// plus a convenience decimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRepr {
    pub num: String,
    pub den: String,
    pub decimal: f64,
}

impl RatioRepr {
    pub fn of(r: &Ratio) -> Self {
        RatioRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: to_f64(r),
        }
    }

    pub fn to_ratio(&self) -> Option<Ratio> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Ratio::new(num, den))
    }
}

/// Parses "p/q", "p", or a decimal literal (mapped to an exact rational with
/// denominator 10^k).
pub fn parse_ratio(s: &str) -> Option<Ratio> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Ratio::new(p, q));
    }
    if let Some((whole, fract)) = s.split_once('.') {
        let sign = if whole.trim_start().starts_with('-') { -1 } else { 1 };
        let whole_int: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        if fract.is_empty() || !fract.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = fract.parse().ok()?;
        let den = BigInt::from(10u32).pow(fract.len() as u32);
        let abs = Ratio::from_integer(whole_int.abs()) + Ratio::new(digits, den);
        return Some(if sign < 0 { -abs } else { abs });
    }
    let p: BigInt = s.parse().ok()?;
    Some(Ratio::from_integer(p))
}

/// Uniform random rational with denominator `den`, in `[0, 1]`.
pub fn random_unit(rng: &mut impl rand::Rng, den: u32) -> Ratio {
    let num = rng.random_range(0..=den);
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(v: &BigInt) -> Ratio {
    Ratio::from_integer(v.clone())
}

/// Renders "p" for integers, "p/q" otherwise.
pub fn to_string(r: &Ratio) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// serde adapter storing a [`Ratio`] as a "p/q" string.
pub mod serde_ratio {
    use super::{parse_ratio, Ratio};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio, D::Error> {
        let s = String::deserialize(d)?;
        parse_ratio(&s).ok_or_else(|| D::Error::custom(format!("bad rational: {s}")))
    }
}

pub fn usize_of(b: &BigInt) -> Option<usize> {
    b.to_usize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_ratio("3/10").unwrap(), frac(3, 10));
        assert_eq!(parse_ratio("7").unwrap(), int(7));
        assert_eq!(parse_ratio("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_ratio("-1.5").unwrap(), frac(-3, 2));
        assert!(parse_ratio("1/0").is_none());
    }

    #[test]
    fn rounding_half_away_from_zero() {
        assert_eq!(round_half_away(&frac(5, 2)), BigInt::from(3));
        assert_eq!(round_half_away(&frac(-5, 2)), BigInt::from(-3));
        assert_eq!(round_half_away(&frac(7, 3)), BigInt::from(2));
        assert_eq!(round_half_away(&int(4)), BigInt::from(4));
    }

    #[test]
    fn repr_roundtrip() {
        let r = frac(463, 700);
        let repr = RatioRepr::of(&r);
        assert_eq!(repr.to_ratio().unwrap(), r);
    }
}
