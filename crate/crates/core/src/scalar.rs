//! Complex coefficients with an exact Gaussian-rational mode.
//!
//! Every value is either [`Scalar::Exact`] (rational real and imaginary parts)
//! or [`Scalar::Float`] (`Complex64`). Arithmetic stays exact while both
//! operands are exact and falls back to `f64` as soon as one is not.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerance;

/// Largest accepted decimal exponent in a literal.
const MAX_EXPONENT: i64 = 4096;
/// Longest accepted numeric literal.
const MAX_LITERAL_LEN: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarParseError {
    #[error("empty numeric literal")]
    Empty,
    #[error("numeric literal too long ({0} bytes)")]
    TooLong(usize),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("exponent out of range in `{0}`")]
    Exponent(String),
    #[error("malformed numeric literal `{0}`")]
    Malformed(String),
    #[error("non-finite value")]
    NonFinite,
}

/// Complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn zero() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    pub fn checked_div(&self, other: &GaussRat) -> Option<GaussRat> {
        let den = other.norm_sqr();
        if den.is_zero() {
            return None;
        }
        Some(GaussRat {
            re: (&self.re * &other.re + &self.im * &other.im) / &den,
            im: (&self.im * &other.re - &self.re * &other.im) / &den,
        })
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    // to_f64 on the ratio handles huge numerators/denominators without overflow
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// A complex coefficient, exact when possible.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(GaussRat),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussRat::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1, 0)
    }

    pub fn i() -> Self {
        Scalar::from_int(0, 1)
    }

    pub fn from_int(re: i64, im: i64) -> Self {
        Scalar::Exact(GaussRat::from_integers(re, im))
    }

    pub fn from_ratio(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(GaussRat::new(re, im))
    }

    /// Exact scalar `re_n/re_d + i im_n/im_d`. Panics on a zero denominator.
    pub fn ratio(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Scalar::from_ratio(
            BigRational::new(re_n.into(), re_d.into()),
            BigRational::new(im_n.into(), im_d.into()),
        )
    }

    pub fn float(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    /// Unit phase `e^{i angle}` in floating mode.
    pub fn unit_from_angle(angle: f64) -> Self {
        Scalar::Float(Complex64::from_polar(1.0, angle))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(z) => z.re.is_finite() && z.im.is_finite(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(z) => z.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_c64())
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(z.conj()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    /// `|z|^2`, exact in exact mode.
    pub fn norm_sqr(&self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(GaussRat::new(z.norm_sqr(), BigRational::zero())),
            Scalar::Float(z) => Scalar::float(z.norm_sqr(), 0.0),
        }
    }

    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Argument in `[0, 2π)`.
    pub fn arg(&self) -> f64 {
        let a = self.to_c64().arg();
        if a < 0.0 {
            let wrapped = a + 2.0 * PI;
            if wrapped >= 2.0 * PI {
                0.0
            } else {
                wrapped
            }
        } else {
            a
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.im.is_zero(),
            Scalar::Float(z) => z.im.abs() <= tolerance::UNIT_REL * z.norm().max(1.0),
        }
    }

    /// `|z| = 1`, exactly in exact mode.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Exact(z) => z.norm_sqr().is_one(),
            Scalar::Float(z) => (z.norm() - 1.0).abs() <= tolerance::UNIT_REL,
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.checked_div(b).map(Scalar::Exact),
            _ => {
                let b = other.to_c64();
                if b.re == 0.0 && b.im == 0.0 {
                    None
                } else {
                    Some(Scalar::Float(self.to_c64() / b))
                }
            }
        }
    }

    /// Equality that is exact for two exact operands and within `tol`
    /// (absolute) otherwise.
    pub fn same_as(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_c64() - other.to_c64()).norm() <= tol,
        }
    }

    /// Parses `3`, `-2/3`, `0.75`, `i`, `-2i`, `1+2i`, `3/5-4/5i`.
    ///
    /// Decimal literals are read as exact rationals, so every accepted
    /// literal yields an exact scalar.
    pub fn parse(text: &str) -> Result<Scalar, ScalarParseError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ScalarParseError::Empty);
        }
        if s.len() > MAX_LITERAL_LEN {
            return Err(ScalarParseError::TooLong(s.len()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar::from_ratio(parse_rational(&s)?, BigRational::zero()));
        };
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re_text, im_text) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re = if re_text.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_text)?
        };
        let im = match im_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t)?,
        };
        Ok(Scalar::from_ratio(re, im))
    }
}

/// Parses `p`, `p/q`, or a decimal such as `-1.25e-3` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ScalarParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ScalarParseError::Empty);
    }
    if s.len() > MAX_LITERAL_LEN {
        return Err(ScalarParseError::TooLong(s.len()));
    }
    let malformed = || ScalarParseError::Malformed(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_decimal(p).ok_or_else(malformed)?;
        let q = parse_decimal(q).ok_or_else(malformed)?;
        let (p, q) = (p?, q?);
        if q.is_zero() {
            return Err(ScalarParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(p / q);
    }
    parse_decimal(s).ok_or_else(malformed)?
}

// None = syntax error; Some(Err) = semantic error.
fn parse_decimal(s: &str) -> Option<Result<BigRational, ScalarParseError>> {
    let (neg, rest) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match rest.find(['e', 'E']) {
        Some(k) => (&rest[..k], Some(&rest[k + 1..])),
        None => (rest, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut exp: i64 = match exponent {
        None => 0,
        Some(e) => {
            let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            match e.parse::<i64>() {
                Ok(v) if v.abs() <= MAX_EXPONENT => v,
                _ => return Some(Err(ScalarParseError::Exponent(s.to_string()))),
            }
        }
    };
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    exp -= frac_part.len() as i64;
    if exp.abs() > MAX_EXPONENT {
        return Some(Err(ScalarParseError::Exponent(s.to_string())));
    }
    let scale = BigRational::from_integer(num::pow(BigInt::from(10), exp.unsigned_abs() as usize));
    if exp >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Some(Ok(if neg { -value } else { value }))
}

/// Parses a comma-separated vector of rationals, e.g. `1,-1/2`.
pub fn parse_rational_vec(text: &str) -> Result<Vec<BigRational>, ScalarParseError> {
    text.split(',').map(parse_rational).collect()
}

/// Parses an angle in radians: a rational/decimal literal, or a multiple of
/// `pi` such as `pi`, `-pi/2`, `3pi/2`, `3*pi/4`.
///
/// Multiples of `pi/2` produce an exact unit phase; anything else is a
/// floating unit phase.
pub fn parse_phase_angle(text: &str) -> Result<Scalar, ScalarParseError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(k) = s.find("pi") {
        let coef_text = s[..k].trim_end_matches('*');
        let coef = match coef_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t)?,
        };
        let den = match &s[k + 2..] {
            "" => BigRational::one(),
            t => {
                let d = t
                    .strip_prefix('/')
                    .ok_or_else(|| ScalarParseError::Malformed(s.clone()))?;
                parse_rational(d)?
            }
        };
        if den.is_zero() {
            return Err(ScalarParseError::ZeroDenominator(s));
        }
        // multiple of pi/2?
        let halves = &coef / &den * BigRational::from_integer(2.into());
        if halves.is_integer() {
            let q = (halves.to_integer() % BigInt::from(4) + BigInt::from(4)) % BigInt::from(4);
            let q = q.to_i64().unwrap_or(0);
            return Ok(match q {
                0 => Scalar::from_int(1, 0),
                1 => Scalar::from_int(0, 1),
                2 => Scalar::from_int(-1, 0),
                _ => Scalar::from_int(0, -1),
            });
        }
        let angle = ratio_to_f64(&(coef / den)) * PI;
        return Ok(Scalar::unit_from_angle(angle));
    }
    let r = parse_rational(&s)?;
    if r.is_zero() {
        return Ok(Scalar::one());
    }
    Ok(Scalar::unit_from_angle(ratio_to_f64(&r)))
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_c64() == other.to_c64(),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v, 0)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Float(z)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    r.to_string()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(z) => {
                if z.im.is_zero() {
                    write!(f, "{}", fmt_ratio(&z.re))
                } else if z.re.is_zero() {
                    write!(f, "{}i", fmt_ratio(&z.im))
                } else if z.im.is_negative() {
                    write!(f, "{}-{}i", fmt_ratio(&z.re), fmt_ratio(&-z.im.clone()))
                } else {
                    write!(f, "{}+{}i", fmt_ratio(&z.re), fmt_ratio(&z.im))
                }
            }
            Scalar::Float(z) => {
                if z.im < 0.0 {
                    write!(f, "{}-{}i", z.re, -z.im)
                } else {
                    write!(f, "{}+{}i", z.re, z.im)
                }
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                (&self).$method(&o)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                (&self).$method(o)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                self.$method(&o)
            }
        }
    };
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_c64() + o.to_c64()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Float(self.to_c64() - o.to_c64()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_c64() * o.to_c64()),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// Panics on division by an exact zero.
    fn div(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                Scalar::Exact(a.checked_div(b).expect("division by exact zero"))
            }
            _ => Scalar::Float(self.to_c64() / o.to_c64()),
        }
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(z) => Scalar::Exact(GaussRat::new(-z.re.clone(), -z.im.clone())),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// One JSON component: an integer or `"p/q"`/decimal string (exact), or a
/// JSON float (floating mode).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Part {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Part {
    pub fn from_ratio(r: &BigRational) -> Part {
        Part::Text(r.to_string())
    }

    /// Exact value, or `None` for a JSON float.
    pub fn exact(&self) -> Result<Option<BigRational>, ScalarParseError> {
        match self {
            Part::Int(v) => Ok(Some(BigRational::from_integer((*v).into()))),
            Part::Text(t) => parse_rational(t).map(Some),
            Part::Float(_) => Ok(None),
        }
    }

    pub fn to_f64(&self) -> Result<f64, ScalarParseError> {
        let v = match self {
            Part::Int(v) => *v as f64,
            Part::Float(v) => *v,
            Part::Text(t) => ratio_to_f64(&parse_rational(t)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ScalarParseError::NonFinite)
        }
    }
}

/// Build a scalar from JSON components; exact iff both parts are exact.
pub fn scalar_from_parts(re: &Part, im: Option<&Part>) -> Result<Scalar, ScalarParseError> {
    let zero = Part::Int(0);
    let im = im.unwrap_or(&zero);
    match (re.exact()?, im.exact()?) {
        (Some(r), Some(i)) => Ok(Scalar::from_ratio(r, i)),
        _ => {
            let (r, i) = (re.to_f64()?, im.to_f64()?);
            Ok(Scalar::float(r, i))
        }
    }
}

/// Inverse of [`scalar_from_parts`].
pub fn scalar_to_parts(z: &Scalar) -> (Part, Part) {
    match z {
        Scalar::Exact(g) => (Part::from_ratio(&g.re), Part::from_ratio(&g.im)),
        Scalar::Float(c) => (Part::Float(c.re), Part::Float(c.im)),
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    re: Part,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Part>,
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (re, im) = scalar_to_parts(self);
        ScalarRepr { re, im: Some(im) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(d)?;
        scalar_from_parts(&repr.re, repr.im.as_ref()).map_err(serde::de::Error::custom)
    }
}

/// Rational serialized as a `"p/q"` string; accepts integers, strings, and
/// (converted exactly) JSON floats.
pub mod ratio_serde {
    use super::*;

    pub fn serialize<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let part = Part::deserialize(d)?;
        part_to_ratio(&part).map_err(serde::de::Error::custom)
    }

    pub fn part_to_ratio(part: &Part) -> Result<BigRational, ScalarParseError> {
        match part.exact()? {
            Some(r) => Ok(r),
            None => {
                let v = part.to_f64()?;
                BigRational::from_float(v).ok_or(ScalarParseError::NonFinite)
            }
        }
    }
}

/// Rational vector serialized as a list of `"p/q"` strings.
pub mod rat_vec_serde {
    use super::*;

    pub fn serialize<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Part::from_ratio).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let parts = Vec::<Part>::deserialize(d)?;
        parts
            .iter()
            .map(ratio_serde::part_to_ratio)
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literal_forms() {
        assert_eq!(Scalar::parse("3").unwrap(), Scalar::from_int(3, 0));
        assert_eq!(Scalar::parse("-2/3").unwrap(), Scalar::ratio(-2, 3, 0, 1));
        assert_eq!(Scalar::parse("0.75").unwrap(), Scalar::ratio(3, 4, 0, 1));
        assert_eq!(Scalar::parse("i").unwrap(), Scalar::i());
        assert_eq!(Scalar::parse("-i").unwrap(), Scalar::from_int(0, -1));
        assert_eq!(Scalar::parse("1+2i").unwrap(), Scalar::from_int(1, 2));
        assert_eq!(Scalar::parse("3/5-4/5i").unwrap(), Scalar::ratio(3, 5, -4, 5));
        assert_eq!(Scalar::parse("1e-2+ 2i").unwrap(), Scalar::ratio(1, 100, 2, 1));
        assert_eq!(Scalar::parse(" 2 i ").unwrap(), Scalar::from_int(0, 2));
        assert!(Scalar::parse("1/0").is_err());
        assert!(Scalar::parse("").is_err());
        assert!(Scalar::parse("1e99999").is_err());
        assert!(Scalar::parse("abc").is_err());
        assert!(Scalar::parse("1++2i").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["3", "-2/3", "1+2i", "3/5-4/5i", "-7i", "0"] {
            let z = Scalar::parse(text).unwrap();
            assert_eq!(Scalar::parse(&z.to_string()).unwrap(), z, "{text}");
        }
    }

    #[test]
    fn mixed_arithmetic_falls_back_to_float() {
        let a = Scalar::from_int(1, 1);
        let b = Scalar::float(0.5, 0.0);
        assert!((&a * &a).is_exact());
        assert!(!(&a * &b).is_exact());
        assert_eq!((&a * &a), Scalar::from_int(0, 2));
    }

    #[test]
    fn unit_and_real_checks() {
        assert!(Scalar::ratio(3, 5, 4, 5).is_unit());
        assert!(!Scalar::from_int(1, 1).is_unit());
        assert!(Scalar::unit_from_angle(1.234).is_unit());
        assert!(Scalar::from_int(5, 0).is_real());
        assert!(!Scalar::i().is_real());
    }

    #[test]
    fn arg_is_in_zero_two_pi() {
        assert_eq!(Scalar::one().arg(), 0.0);
        assert!((Scalar::from_int(0, -1).arg() - 1.5 * PI).abs() < 1e-15);
        assert!((Scalar::from_int(-1, 0).arg() - PI).abs() < 1e-15);
    }

    #[test]
    fn phase_angles() {
        assert_eq!(parse_phase_angle("0").unwrap(), Scalar::one());
        assert_eq!(parse_phase_angle("pi/2").unwrap(), Scalar::i());
        assert_eq!(parse_phase_angle("-pi/2").unwrap(), Scalar::from_int(0, -1));
        assert_eq!(parse_phase_angle("3pi").unwrap(), Scalar::from_int(-1, 0));
        assert_eq!(parse_phase_angle("3*pi/2").unwrap(), Scalar::from_int(0, -1));
        let q = parse_phase_angle("pi/3").unwrap();
        assert!(!q.is_exact());
        assert!((q.arg() - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn json_parts() {
        let z: Scalar = serde_json::from_str(r#"{"re": "1/2", "im": -3}"#).unwrap();
        assert_eq!(z, Scalar::ratio(1, 2, -3, 1));
        let w: Scalar = serde_json::from_str(r#"{"re": 0.5}"#).unwrap();
        assert!(!w.is_exact());
        let back: Scalar = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        assert_eq!(back, z);
        assert!(back.is_exact());
    }
}
