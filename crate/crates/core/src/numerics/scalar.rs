//! Dual-backend scalar arithmetic.
//!
//! Every time, cost and threshold in the simulator is a [`Scalar`]. The exact
//! backend ([`Exact`], arbitrary-precision rationals) is the reference used by
//! invariant assertions; the float backend ([`F64`]) is for large sweeps where
//! a 1e-9 tolerance is acceptable.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which numeric backend a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => write!(f, "exact"),
            Backend::Float => write!(f, "float"),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown backend {other:?}"))),
        }
    }
}

/// Number type shared by the whole simulator.
///
/// Implementations must keep values finite; operations are total on the
/// values the engine produces (no division by zero is ever requested).
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Serialize
    + DeserializeOwned
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn from_i64(v: i64) -> Self;
    /// num/den as a scalar; `den` must be nonzero.
    fn ratio(num: i64, den: u64) -> Self;
    fn to_f64(&self) -> f64;
    /// Parse the serialized form ("p/q", integer, or decimal).
    fn parse(text: &str) -> Result<Self>;
    /// Canonical serialized form.
    fn render(&self) -> String;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Total ordering; all exposed values are finite so this never fails.
    fn cmp2(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("scalar values are finite")
    }

    /// Threshold test used by wait conditions: exact backend compares
    /// exactly, float backend allows a 1e-9 slack so closed-form wake-up
    /// times are recognized despite rounding.
    fn reaches(&self, target: &Self) -> bool;

    fn min2(self, other: Self) -> Self {
        if self.cmp2(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    fn max2(self, other: Self) -> Self {
        if self.cmp2(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn mul_u64(&self, c: u64) -> Self {
        self.clone() * Self::from_u64(c)
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out * self.clone();
        }
        out
    }

    /// Snap a nonnegative f64 onto the 2^-grid_log2 grid (used to rationalize
    /// sampled arrival times so exact runs stay exact).
    fn from_f64_grid(x: f64, grid_log2: u32) -> Self {
        let scale = (1u64 << grid_log2) as f64;
        let num = (x * scale).round();
        debug_assert!(num.is_finite() && num >= 0.0 && num <= i64::MAX as f64);
        Self::ratio(num as i64, 1u64 << grid_log2)
    }
}

// ---------------------------------------------------------------------------
// Exact backend

/// Arbitrary-precision rational scalar. Always stored in lowest terms with a
/// positive denominator (enforced by `BigRational`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exact(BigRational);

impl Exact {
    pub fn from_big(r: BigRational) -> Self {
        Exact(r)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

macro_rules! exact_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                Exact((self.0).$method(rhs.0))
            }
        }
    };
}

exact_binop!(Add, add);
exact_binop!(Sub, sub);
exact_binop!(Mul, mul);
exact_binop!(Div, div);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact(-self.0)
    }
}

impl Scalar for Exact {
    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Exact(BigRational::zero())
    }

    fn one() -> Self {
        Exact(BigRational::from_integer(BigInt::from(1)))
    }

    fn from_u64(v: u64) -> Self {
        Exact(BigRational::from_integer(BigInt::from(v)))
    }

    fn from_i64(v: i64) -> Self {
        Exact(BigRational::from_integer(BigInt::from(v)))
    }

    fn ratio(num: i64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            self.0.numer().to_f64().unwrap_or(f64::MAX) / self.0.denom().to_f64().unwrap_or(1.0)
        })
    }

    fn parse(text: &str) -> Result<Self> {
        parse_exact(text)
    }

    fn render(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn reaches(&self, target: &Self) -> bool {
        self >= target
    }
}

fn parse_exact(text: &str) -> Result<Exact> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(Exact(BigRational::new(n, d)));
    }
    // Decimal / scientific notation, e.g. "0.25", "1e-3", "2.5e2".
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i32 = e
                .parse()
                .map_err(|err| Error::Parse(format!("bad exponent {e:?}: {err}")))?;
            (m, exp)
        }
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{}{}", int_part.trim_start_matches('-'), frac_part);
    let digits = if digits.is_empty() { "0".into() } else { digits };
    let n = BigInt::from_str(&digits)
        .map_err(|e| Error::Parse(format!("bad number {text:?}: {e}")))?;
    let n = if mantissa.starts_with('-') { -n } else { n };
    let shift = exponent - frac_part.len() as i32;
    let value = if shift >= 0 {
        BigRational::from_integer(n * BigInt::from(10u32).pow(shift as u32))
    } else {
        BigRational::new(n, BigInt::from(10u32).pow((-shift) as u32))
    };
    Ok(Exact(value))
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        repr.into_exact().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Float backend

/// 64-bit float scalar. Every produced value is checked to be finite.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct F64(f64);

impl F64 {
    pub fn new(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite float scalar: {v}");
        F64(v)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Debug for F64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for F64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

macro_rules! float_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for F64 {
            type Output = F64;
            fn $method(self, rhs: F64) -> F64 {
                F64::new((self.0).$method(rhs.0))
            }
        }
    };
}

float_binop!(Add, add);
float_binop!(Sub, sub);
float_binop!(Mul, mul);
float_binop!(Div, div);

impl Neg for F64 {
    type Output = F64;
    fn neg(self) -> F64 {
        F64(-self.0)
    }
}

const FLOAT_SLACK: f64 = 1e-9;

impl Scalar for F64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        F64(0.0)
    }

    fn one() -> Self {
        F64(1.0)
    }

    fn from_u64(v: u64) -> Self {
        F64::new(v as f64)
    }

    fn from_i64(v: i64) -> Self {
        F64::new(v as f64)
    }

    fn ratio(num: i64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        F64::new(num as f64 / den as f64)
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
            if d == 0.0 {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(F64::new(n / d));
        }
        let v: f64 = text
            .parse()
            .map_err(|e| Error::Parse(format!("bad float {text:?}: {e}")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite float {text:?}")));
        }
        Ok(F64(v))
    }

    fn render(&self) -> String {
        // {:?} is the shortest representation that round-trips.
        format!("{:?}", self.0)
    }

    fn reaches(&self, target: &Self) -> bool {
        let slack = FLOAT_SLACK * target.0.abs().max(1.0);
        self.0 >= target.0 - slack
    }
}

impl Serialize for F64 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for F64 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        repr.into_f64().map_err(serde::de::Error::custom)
    }
}

/// Accepts strings ("p/q", decimal) and bare JSON numbers on input.
#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Text(String),
    Int(i64),
    Float(f64),
}

impl ScalarRepr {
    fn into_exact(self) -> Result<Exact> {
        match self {
            ScalarRepr::Text(s) => Exact::parse(&s),
            ScalarRepr::Int(v) => Ok(Exact::from_i64(v)),
            ScalarRepr::Float(v) => Exact::parse(&format!("{v:?}")),
        }
    }

    fn into_f64(self) -> Result<F64> {
        match self {
            ScalarRepr::Text(s) => F64::parse(&s),
            ScalarRepr::Int(v) => Ok(F64::from_i64(v)),
            ScalarRepr::Float(v) => {
                if v.is_finite() {
                    Ok(F64(v))
                } else {
                    Err(Error::Parse("non-finite float".into()))
                }
            }
        }
    }
}

/// A competitive ratio: finite value or the unbounded marker, with 0/0 = 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Ratio<S: Scalar> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Ratio<S> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Ratio::Finite(_))
    }

    pub fn finite(&self) -> Option<&S> {
        match self {
            Ratio::Finite(v) => Some(v),
            Ratio::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Ratio::Finite(v) => v.to_f64(),
            Ratio::Infinite => f64::INFINITY,
        }
    }
}

impl<S: Scalar> fmt::Display for Ratio<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(v) => write!(f, "{v}"),
            Ratio::Infinite => write!(f, "inf"),
        }
    }
}

/// alg/opt with 0/0 read as 1 and positive/0 as unbounded.
pub fn competitive_ratio<S: Scalar>(alg_cost: &S, opt_cost: &S) -> Result<Ratio<S>> {
    let zero = S::zero();
    if alg_cost.cmp2(&zero) == Ordering::Less || opt_cost.cmp2(&zero) == Ordering::Less {
        return Err(Error::NegativeCost);
    }
    if opt_cost.is_zero() {
        if alg_cost.is_zero() {
            Ok(Ratio::Finite(S::one()))
        } else {
            Ok(Ratio::Infinite)
        }
    } else {
        Ok(Ratio::Finite(alg_cost.clone() / opt_cost.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_roundtrip() {
        let x = Exact::ratio(-7, 14);
        assert_eq!(x.render(), "-1/2");
        assert_eq!(Exact::parse("-1/2").unwrap(), x);
        assert_eq!(Exact::parse("-0.5").unwrap(), x);
        assert_eq!(Exact::parse("3").unwrap(), Exact::from_u64(3));
        assert_eq!(Exact::parse("1e-3").unwrap(), Exact::ratio(1, 1000));
        assert_eq!(Exact::parse("2.5e2").unwrap(), Exact::from_u64(250));
    }

    #[test]
    fn ratio_cases() {
        let r = competitive_ratio(&Exact::zero(), &Exact::zero()).unwrap();
        assert_eq!(r, Ratio::Finite(Exact::one()));
        let r = competitive_ratio(&Exact::from_u64(2), &Exact::from_u64(1)).unwrap();
        assert_eq!(r, Ratio::Finite(Exact::from_u64(2)));
        let r = competitive_ratio(&Exact::from_u64(3), &Exact::zero()).unwrap();
        assert_eq!(r, Ratio::Infinite);
        assert!(competitive_ratio(&Exact::from_i64(-1), &Exact::zero()).is_err());
    }

    #[test]
    fn float_reaches_has_slack() {
        let just_below = F64::new(2.0 - 1e-12);
        assert!(just_below.reaches(&F64::new(2.0)));
        assert!(!F64::new(1.9).reaches(&F64::new(2.0)));
        let e = Exact::ratio(199, 100);
        assert!(!e.reaches(&Exact::from_u64(2)));
        assert!(Exact::from_u64(2).reaches(&Exact::from_u64(2)));
    }

    #[test]
    fn grid_rationalization() {
        let x = Exact::from_f64_grid(0.75, 30);
        assert_eq!(x, Exact::ratio(3, 4));
    }
}
