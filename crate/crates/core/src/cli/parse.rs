//! Shell syntax for stencils, signals and bodies.
//!
//! * entries: `x=v;x=v`, where `x` is a comma list of rationals and `v` a
//!   scalar such as `2`, `-1/3`, `3/5+4/5i`. Example: `0=i;2=1;-2=1`.
//! * bodies: `ball:<center>:<radius>` or `box:<lo>:<hi>`, e.g. `ball:1/2:3/4`
//!   or `box:-1,-1:1,1`.

use num::rational::BigRational;
use thiserror::Error;

use crate::continuous::RatPoint;
use crate::geometry::{ConvexBody, GeometryError};
use crate::scalar::{parse_rational, parse_rational_vec, ratio_to_f64, Scalar, ScalarParseError};

/// Longest accepted entry list.
pub const MAX_ENTRIES: usize = 4096;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("entry `{0}` is not of the form point=value")]
    Entry(String),
    #[error("too many entries ({0})")]
    TooMany(usize),
    #[error("entries mix dimensions {0} and {1}")]
    MixedDimension(usize, usize),
    #[error("body `{0}` is not ball:<center>:<radius> or box:<lo>:<hi>")]
    Body(String),
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Parses `x=v;x=v` into points with their values.
pub fn parse_entries(text: &str) -> Result<Vec<(RatPoint, Scalar)>, ParseError> {
    let parts: Vec<&str> = text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.is_empty() {
        return Err(ParseError::Empty("entry list"));
    }
    if parts.len() > MAX_ENTRIES {
        return Err(ParseError::TooMany(parts.len()));
    }
    let mut out: Vec<(RatPoint, Scalar)> = Vec::with_capacity(parts.len());
    for part in parts {
        let (x, v) = part.split_once('=').ok_or_else(|| ParseError::Entry(part.to_string()))?;
        let x = parse_rational_vec(x)?;
        if let Some((first, _)) = out.first() {
            if first.len() != x.len() {
                return Err(ParseError::MixedDimension(first.len(), x.len()));
            }
        }
        out.push((x, Scalar::parse(v)?));
    }
    Ok(out)
}

fn f64_vec(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(ratio_to_f64).collect()
}

pub fn parse_body(text: &str) -> Result<ConvexBody, ParseError> {
    let bad = || ParseError::Body(text.to_string());
    let mut it = text.trim().splitn(3, ':');
    let (kind, a, b) = match (it.next(), it.next(), it.next()) {
        (Some(k), Some(a), Some(b)) => (k, a, b),
        _ => return Err(bad()),
    };
    match kind {
        "ball" => {
            let c = f64_vec(&parse_rational_vec(a)?);
            let r = ratio_to_f64(&parse_rational(b)?);
            Ok(ConvexBody::ball(c, r)?)
        }
        "box" => {
            let lo = f64_vec(&parse_rational_vec(a)?);
            let hi = f64_vec(&parse_rational_vec(b)?);
            Ok(ConvexBody::aabb(&lo, &hi)?)
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_roundtrip() {
        let e = parse_entries("0=i; 2=1 ;-2=3/5-4/5i").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e[0].1, Scalar::i());
        assert_eq!(e[2].0, vec![BigRational::from_integer((-2).into())]);
        assert_eq!(e[2].1, Scalar::ratio(3, 5, -4, 5));
        let e = parse_entries("0,1=2;1,0=1").unwrap();
        assert_eq!(e[0].0.len(), 2);
    }

    #[test]
    fn entries_reject_garbage() {
        assert!(matches!(parse_entries(""), Err(ParseError::Empty(_))));
        assert!(matches!(parse_entries("1"), Err(ParseError::Entry(_))));
        assert!(matches!(parse_entries("1=1;1,2=1"), Err(ParseError::MixedDimension(1, 2))));
        assert!(parse_entries("x=1").is_err());
    }

    #[test]
    fn bodies() {
        let b = parse_body("ball:1/2:3/4").unwrap();
        assert_eq!(b.bounding_box(), (vec![-0.25], vec![1.25]));
        let b = parse_body("box:-1.5:1.5").unwrap();
        assert!(b.is_symmetric());
        assert!(parse_body("ball:0").is_err());
        assert!(parse_body("cone:0:1").is_err());
        assert!(parse_body("box:1,2:3").is_err());
    }
}
