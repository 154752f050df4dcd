use serde::Serialize;

use super::minnorm::{norm, sub};
use super::{distance, ConvexBody, GeometryError};
use crate::tolerance;

/// Largest number of lattice points scanned per body.
const MAX_LATTICE_SCAN: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Problem3Report {
    /// `dist(D, D₀)`.
    #[serde(rename = "R")]
    pub r: f64,
    /// `diam(D)`.
    pub diam: f64,
    /// `0 < R < diam(D)`, plus nonempty lattice traces in discrete mode.
    pub pass: bool,
    pub reason: Option<String>,
    /// `D ∩ Z^d ≠ ∅` and `D₀ ∩ Z^d ≠ ∅`; only evaluated in discrete mode.
    pub lattice_ok: Option<bool>,
}

/// Checks the ambiguity regime `0 < dist(D, D₀) < diam(D)`. Beyond it the
/// background problem is uniquely solvable, so no ambiguity can exist there.
pub fn check_problem3_geometry(
    d0: &ConvexBody,
    d: &ConvexBody,
    discrete: bool,
) -> Result<Problem3Report, GeometryError> {
    let r = distance(d, d0)?;
    let diam = d.diameter();
    let reason = if r <= tolerance::GEOMETRY {
        Some("domains touch or overlap (R = 0)".to_string())
    } else if r >= diam - tolerance::GEOMETRY {
        Some("uniqueness regime: dist(D, D0) >= diam(D)".to_string())
    } else {
        None
    };
    let lattice_ok = if discrete {
        Some(has_lattice_point(d)? && has_lattice_point(d0)?)
    } else {
        None
    };
    let reason = match (reason, lattice_ok) {
        (None, Some(false)) => Some("a domain contains no lattice point".to_string()),
        (r, _) => r,
    };
    Ok(Problem3Report {
        r,
        diam,
        pass: reason.is_none(),
        reason,
        lattice_ok,
    })
}

/// Some integer point lies in the open body.
pub fn has_lattice_point(b: &ConvexBody) -> Result<bool, GeometryError> {
    let (lo, hi) = b.bounding_box();
    let lo: Vec<i64> = lo.iter().map(|v| v.ceil() as i64).collect();
    let hi: Vec<i64> = hi.iter().map(|v| v.floor() as i64).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(false);
    }
    let mut x = lo.clone();
    let mut scanned = 0u64;
    loop {
        let p: Vec<f64> = x.iter().map(|&c| c as f64).collect();
        if b.contains_open(&p)? {
            return Ok(true);
        }
        scanned += 1;
        if scanned >= MAX_LATTICE_SCAN {
            return Ok(false);
        }
        let mut j = 0;
        loop {
            if j == x.len() {
                return Ok(false);
            }
            if x[j] < hi[j] {
                x[j] += 1;
                break;
            }
            x[j] = lo[j];
            j += 1;
        }
    }
}

fn same_point(a: &[f64], b: &[f64]) -> bool {
    norm(&sub(a, b)) <= tolerance::GEOMETRY * (1.0 + norm(a).max(norm(b)))
}

fn contains_point(set: &[Vec<f64>], x: &[f64]) -> bool {
    set.iter().any(|v| same_point(v, x))
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|c| -c).collect()
}

/// `(T ∪ −T) \ {y*}`, deduplicated, in input order.
pub fn remaining_offsets(t: &[Vec<f64>], y_star: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for y in t.iter().cloned().chain(t.iter().map(|y| neg(y))) {
        if !same_point(&y, y_star) && !contains_point(&out, &y) {
            out.push(y);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thm4Separation {
    /// `D₀ ∩ D = ∅` with a strictly positive gap.
    pub separated: bool,
    pub distance: f64,
    /// `D₀ = B + y*`.
    pub d0: ConvexBody,
    /// `D = ch(⋃ (B + y))` over `y ∈ (T ∪ −T) \ {y*}`.
    pub d: ConvexBody,
}

/// Builds `D₀` and `D` for a reference offset `y*` and tests their
/// separation. Requires `y* ∈ T` and `−y* ∈ T`.
pub fn check_thm4_separation(
    base: &ConvexBody,
    t: &[Vec<f64>],
    y_star: &[f64],
) -> Result<Thm4Separation, GeometryError> {
    for y in t {
        super::check_dim(base.dim(), y.len())?;
    }
    super::check_dim(base.dim(), y_star.len())?;
    if !contains_point(t, y_star) {
        return Err(GeometryError::OffsetNotInStencil);
    }
    if !contains_point(t, &neg(y_star)) {
        return Err(GeometryError::ReflectionNotInStencil);
    }
    let rest = remaining_offsets(t, y_star);
    if rest.is_empty() {
        return Err(GeometryError::NoRemainingOffsets);
    }
    let d0 = base.translate(y_star)?;
    let d = base.hull_of_translates(&rest)?;
    let gap = distance(&d0, &d)?;
    Ok(Thm4Separation {
        separated: gap > tolerance::GEOMETRY,
        distance: gap,
        d0,
        d,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Remark5Outcome {
    /// `T = −T`; the statement has nothing to prove.
    Inapplicable { reason: String },
    Checked {
        /// `y* ∉ ch((T ∪ −T) \ {y*})`.
        y_star_outside_hull: bool,
        /// No `z ∈ {t + s : t, s ∈ T}` gives `T = −T + z`.
        no_symmetric_translate: bool,
        candidates_checked: usize,
    },
}

impl Remark5Outcome {
    pub fn pass(&self) -> bool {
        match self {
            Remark5Outcome::Inapplicable { .. } => false,
            Remark5Outcome::Checked {
                y_star_outside_hull,
                no_symmetric_translate,
                ..
            } => *y_star_outside_hull && *no_symmetric_translate,
        }
    }
}

fn same_set(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    a.iter().all(|x| contains_point(b, x)) && b.iter().all(|x| contains_point(a, x))
}

/// Under a separated reference offset with `T ≠ −T`, no translate of `−T`
/// equals `T`. Checks the hull argument and, independently, every candidate
/// translation.
pub fn check_remark5(
    base: &ConvexBody,
    t: &[Vec<f64>],
    y_star: &[f64],
) -> Result<Remark5Outcome, GeometryError> {
    let sep = check_thm4_separation(base, t, y_star)?;
    if !sep.separated {
        return Err(GeometryError::SeparationFails(sep.distance));
    }
    let minus_t: Vec<Vec<f64>> = t.iter().map(|y| neg(y)).collect();
    if same_set(t, &minus_t) {
        return Ok(Remark5Outcome::Inapplicable {
            reason: "T = -T".to_string(),
        });
    }
    let rest = remaining_offsets(t, y_star);
    let hull = ConvexBody::new(base.dim(), rest, 0.0)?;
    let y_star_outside_hull = !hull.core_contains(y_star)?;
    let mut candidates = 0;
    let mut found = false;
    for a in t {
        for b in t {
            candidates += 1;
            let z: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let moved: Vec<Vec<f64>> = minus_t
                .iter()
                .map(|m| m.iter().zip(&z).map(|(x, y)| x + y).collect())
                .collect();
            if same_set(t, &moved) {
                found = true;
            }
        }
    }
    Ok(Remark5Outcome::Checked {
        y_star_outside_hull,
        no_symmetric_translate: !found,
        candidates_checked: candidates,
    })
}
