//! Dual-mode numbers.
//!
//! Every algorithm in this crate is generic over [`Scalar`], which has two
//! implementations: [`Rational`] (arbitrary-precision exact fractions, used
//! for enumeration oracles and small sequence lengths) and `f64` (used when
//! the sequence length makes exact arithmetic impractical).

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number backed by arbitrary-precision integers.
pub type Rational = BigRational;

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Rational,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rational => "rational",
            Mode::Float => "float",
        }
    }
}

pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + Sum + Send + Sync + 'static {
    const MODE: Mode;

    fn from_u64(n: u64) -> Self;

    fn from_biguint(n: &BigUint) -> Self;

    /// `num / den`, rounded once in float mode.
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Exact conversion for rationals (the binary expansion), identity for floats.
    /// `None` for non-finite input.
    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn to_rational(&self) -> Option<Rational>;

    /// Tolerance applied when validating constructed laws and measures.
    fn construction_tol() -> Self;

    /// Tolerance applied to quantities derived by summation.
    fn derived_tol() -> Self;

    fn is_exact() -> bool {
        Self::MODE == Mode::Rational
    }

    fn powu(&self, exp: usize) -> Self {
        num_traits::pow(self.clone(), exp)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_u64(n as u64)
    }

    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Rational;

    fn from_u64(n: u64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_biguint(n: &BigUint) -> Self {
        Rational::from_integer(BigInt::from(n.clone()))
    }

    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Option<Self> {
        <Rational as FromPrimitive>::from_f64(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn construction_tol() -> Self {
        Rational::zero()
    }

    fn derived_tol() -> Self {
        Rational::zero()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn from_biguint(n: &BigUint) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }

    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        // Operands beyond the f64 range go through the rational to avoid inf/inf.
        if num.bits() < 1000 && den.bits() < 1000 {
            <f64 as Scalar>::from_biguint(num) / <f64 as Scalar>::from_biguint(den)
        } else {
            Scalar::to_f64(&<Rational as Scalar>::from_ratio(num, den))
        }
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        <Rational as FromPrimitive>::from_f64(*self)
    }

    fn construction_tol() -> Self {
        1e-12
    }

    fn derived_tol() -> Self {
        1e-9
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
    }
}

/// `"num/den"` in lowest terms (the denominator is always written).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"a/b"`, `"a"` or a decimal literal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// Reads a JSON number or rational string into `S`.
///
/// Strings are parsed exactly; JSON numbers are taken as binary floats.
pub fn scalar_from_json<S: Scalar>(value: &serde_json::Value) -> Result<S> {
    match value {
        serde_json::Value::String(s) => Ok(S::from_rational(&parse_rational(s)?)),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(S::from_rational(&Rational::from_integer(BigInt::from(i))));
            }
            let x = n.as_f64().ok_or_else(|| Error::Parse(format!("unrepresentable number {n}")))?;
            S::from_f64(x).ok_or_else(|| Error::Parse(format!("non-finite number {n}")))
        }
        other => Err(Error::Parse(format!("expected a number or rational string, got {other}"))),
    }
}

/// Shorthand for building exact rationals in tests and examples.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn max_of<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().fold(S::zero(), |acc, v| if v > acc { v } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), ratio(-3, 20));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn formats_lowest_terms_with_denominator() {
        assert_eq!(format_rational(&ratio(6, 8)), "3/4");
        assert_eq!(format_rational(&ratio(2, 2)), "1/1");
        assert_eq!(format_rational(&ratio(0, 5)), "0/1");
    }

    #[test]
    fn float_ratio_of_huge_integers_is_finite() {
        let big = num_traits::pow(BigUint::from(10u32), 400);
        let num = &big * 3u32;
        assert_eq!(<f64 as Scalar>::from_ratio(&num, &big), 3.0);
    }

    #[test]
    fn json_numbers_and_strings() {
        let v: serde_json::Value = serde_json::json!(["1/3", 0.5, 2]);
        let arr = v.as_array().unwrap();
        assert_eq!(scalar_from_json::<Rational>(&arr[0]).unwrap(), ratio(1, 3));
        assert_eq!(scalar_from_json::<Rational>(&arr[1]).unwrap(), ratio(1, 2));
        assert_eq!(scalar_from_json::<f64>(&arr[2]).unwrap(), 2.0);
        assert!(scalar_from_json::<f64>(&serde_json::json!(null)).is_err());
    }
}
