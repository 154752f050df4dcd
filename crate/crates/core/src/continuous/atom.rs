use std::cmp::Ordering;

use num::rational::BigRational;
use num::{One, Signed};

use super::{check_coords, rat_add, rat_neg, rat_sub, rat_to_f64, ContinuousError};
use crate::lattice::Placement;

/// A point of `R^d` with rational coordinates.
pub type RatPoint = Vec<BigRational>;

impl Placement for RatPoint {
    type Offset = RatPoint;

    fn offset_to(&self, to: &Self) -> Option<RatPoint> {
        (self.len() == to.len()).then(|| rat_sub(to, self))
    }

    fn translated(&self, by: &RatPoint) -> RatPoint {
        rat_add(self, by)
    }

    fn negated(&self) -> RatPoint {
        rat_neg(self)
    }
}

/// Indicator of the open box `center ± halfwidth`.
///
/// Ordered by center first, so translation preserves the order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxAtom {
    center: RatPoint,
    halfwidth: RatPoint,
}

impl PartialOrd for BoxAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BoxAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.center
            .cmp(&other.center)
            .then_with(|| self.halfwidth.cmp(&other.halfwidth))
    }
}

impl BoxAtom {
    pub fn new(center: RatPoint, halfwidth: RatPoint) -> Result<Self, ContinuousError> {
        if center.is_empty() {
            return Err(ContinuousError::ZeroDimension);
        }
        super::check_dim(center.len(), halfwidth.len())?;
        if halfwidth.iter().any(|h| !h.is_positive()) {
            return Err(ContinuousError::NonPositiveHalfwidth);
        }
        check_coords(&center)?;
        check_coords(&halfwidth)?;
        if rat_to_f64(&halfwidth).iter().any(|&h| h <= 0.0) {
            return Err(ContinuousError::NonPositiveHalfwidth);
        }
        Ok(BoxAtom { center, halfwidth })
    }

    /// The ball `|x − center| < radius`. Only a box in one dimension.
    pub fn ball(center: RatPoint, radius: BigRational) -> Result<Self, ContinuousError> {
        if center.len() != 1 {
            return Err(ContinuousError::BallAtomDimension(center.len()));
        }
        BoxAtom::new(center, vec![radius])
    }

    /// Cube with equal halfwidth `r` on every axis.
    pub fn cube(center: RatPoint, r: BigRational) -> Result<Self, ContinuousError> {
        let d = center.len();
        BoxAtom::new(center, vec![r; d])
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &RatPoint {
        &self.center
    }

    pub fn halfwidth(&self) -> &RatPoint {
        &self.halfwidth
    }

    pub fn center_f64(&self) -> Vec<f64> {
        rat_to_f64(&self.center)
    }

    pub fn halfwidth_f64(&self) -> Vec<f64> {
        rat_to_f64(&self.halfwidth)
    }

    pub fn translated(&self, by: &[BigRational]) -> BoxAtom {
        BoxAtom {
            center: rat_add(&self.center, by),
            halfwidth: self.halfwidth.clone(),
        }
    }

    pub fn reflected(&self) -> BoxAtom {
        BoxAtom {
            center: rat_neg(&self.center),
            halfwidth: self.halfwidth.clone(),
        }
    }

    /// The open boxes intersect (touching boxes do not).
    pub fn overlaps(&self, other: &BoxAtom) -> bool {
        (0..self.dim()).all(|j| {
            let gap = (&self.center[j] - &other.center[j]).abs();
            gap < &self.halfwidth[j] + &other.halfwidth[j]
        })
    }

    /// Lower and upper corners of the closed box.
    pub fn bounds(&self) -> (RatPoint, RatPoint) {
        (
            rat_sub(&self.center, &self.halfwidth),
            rat_add(&self.center, &self.halfwidth),
        )
    }

    /// All `2^d` corners, as floats.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        let (lo, hi) = self.bounds();
        let (lo, hi) = (rat_to_f64(&lo), rat_to_f64(&hi));
        let d = self.dim();
        (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|j| if mask >> j & 1 == 1 { hi[j] } else { lo[j] })
                    .collect()
            })
            .collect()
    }

    /// Volume `Π 2h_j`.
    pub fn volume(&self) -> BigRational {
        let two = BigRational::from_integer(2.into());
        self.halfwidth
            .iter()
            .fold(BigRational::one(), |acc, h| acc * &two * h)
    }
}

impl Placement for BoxAtom {
    type Offset = RatPoint;

    fn offset_to(&self, to: &Self) -> Option<RatPoint> {
        (self.halfwidth == to.halfwidth).then(|| rat_sub(&to.center, &self.center))
    }

    fn translated(&self, by: &RatPoint) -> BoxAtom {
        BoxAtom::translated(self, by)
    }

    fn negated(&self) -> BoxAtom {
        self.reflected()
    }
}
