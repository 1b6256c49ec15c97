//! Exact rational scalars, the decimal grammar used by the file format, and
//! rendering back to decimal or fraction text.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Every distance, mass and solver value is an exact rational.
pub type Real = BigRational;

pub fn int(v: i64) -> Real {
    Real::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Real {
    Real::new(BigInt::from(num), BigInt::from(den))
}

/// `2^exp` for any integer exponent.
pub fn pow2(exp: i64) -> Real {
    let p = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Real::from_integer(p)
    } else {
        Real::new(BigInt::one(), p)
    }
}

fn pow10(exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

/// Parses the exact numeric grammar:
///
/// ```text
/// number   := decimal | fraction
/// decimal  := ['+'|'-'] digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
///           | ['+'|'-'] '.' digits [exponent]
/// fraction := ['+'|'-'] digits '/' digits        (denominator > 0)
/// ```
///
/// Decimal text is read digit by digit, so `0.1` is exactly one tenth.
pub fn parse_real(text: &str) -> Result<Real, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not an exact number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = parse_signed_digits(n).ok_or_else(bad)?;
        let den: BigInt = parse_signed_digits(d).ok_or_else(bad)?;
        if den.sign() != Sign::Plus {
            return Err(Error::Parse(format!("fraction needs a positive denominator: {text:?}")));
        }
        return Ok(Real::new(num, den));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = parse_signed_digits(&body[pos + 1..])
                .and_then(|e| e.to_i64())
                .ok_or_else(bad)?;
            (&body[..pos], e)
        }
        None => (body, 0),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if negative {
        num = -num;
    }
    let scale = exponent - frac.len() as i64;
    let value = if scale >= 0 {
        Real::from_integer(num * pow10(scale as u64))
    } else {
        Real::new(num, pow10(scale.unsigned_abs()))
    };
    Ok(value)
}

fn parse_signed_digits(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Exact decimal text when the denominator is of the form `2^a 5^b`.
pub fn exact_decimal(v: &Real) -> Option<String> {
    let mut den = v.denom().clone();
    let mut twos = 0u64;
    let mut fives = 0u64;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while den.is_multiple_of(&two) {
        den /= &two;
        twos += 1;
    }
    while den.is_multiple_of(&five) {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = (v * Real::from_integer(pow10(places))).to_integer();
    Some(place_point(&scaled, places))
}

fn place_point(scaled: &BigInt, places: u64) -> String {
    let negative = scaled.is_negative();
    let mut digits = scaled.abs().to_string();
    if places > 0 {
        let places = places as usize;
        if digits.len() <= places {
            digits = format!("{}{}", "0".repeat(places + 1 - digits.len()), digits);
        }
        digits.insert(digits.len() - places, '.');
        while digits.ends_with('0') {
            digits.pop();
        }
        if digits.ends_with('.') {
            digits.pop();
        }
    }
    if negative {
        format!("-{digits}")
    } else {
        digits
    }
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn format_fraction(v: &Real) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Decimal rendering rounded (half away from zero) to `sig` significant digits.
/// Plain positional notation, trailing zeros trimmed.
pub fn format_decimal(v: &Real, sig: usize) -> String {
    let sig = sig.max(1) as i64;
    if v.is_zero() {
        return "0".to_string();
    }
    let negative = v.is_negative();
    let a = v.abs();
    // e = floor(log10 a)
    let mut e: i64 = a.to_integer().to_string().len() as i64 - 1;
    if a < Real::one() {
        e = -1;
        while a < pow10_real(e) {
            e -= 1;
        }
    }
    let shift = sig - 1 - e;
    let mut scaled = round_half_away(&(&a * pow10_real(shift)));
    if scaled >= pow10(sig as u64) {
        scaled /= BigInt::from(10);
        e += 1;
    }
    let shift = sig - 1 - e;
    let text = if shift >= 0 {
        place_point(&scaled, shift as u64)
    } else {
        (scaled * pow10(shift.unsigned_abs())).to_string()
    };
    if negative {
        format!("-{text}")
    } else {
        text
    }
}

fn pow10_real(exp: i64) -> Real {
    if exp >= 0 {
        Real::from_integer(pow10(exp as u64))
    } else {
        Real::new(BigInt::one(), pow10(exp.unsigned_abs()))
    }
}

fn round_half_away(v: &Real) -> BigInt {
    let half = ratio(1, 2);
    (v + half).floor().to_integer()
}

pub fn to_f64(v: &Real) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite `f64` (its binary value, not its shortest repr).
pub fn from_f64(v: f64) -> Option<Real> {
    Real::from_float(v)
}

/// A real number or `+∞`; used for the separation of a one-point space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Real),
    Infinity,
}

impl ExtReal {
    pub fn finite(&self) -> Option<&Real> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Infinity, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
        }
    }
}

impl From<Real> for ExtReal {
    fn from(v: Real) -> Self {
        ExtReal::Finite(v)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => f.write_str(&format_fraction(v)),
            ExtReal::Infinity => f.write_str("inf"),
        }
    }
}
