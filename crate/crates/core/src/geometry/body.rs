use serde::{Deserialize, Serialize};

use super::minnorm::{self, add, norm, sub};
use super::{check_dim, GeometryError, MAX_BODY_DIM, MAX_VERTICES};
use crate::continuous::BoxAtom;
use crate::tolerance;

/// `ch(vertices) ⊕ radius · (unit ball)`: a ball-swept polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyRepr", into = "BodyRepr")]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    radius: f64,
}

#[derive(Serialize, Deserialize)]
struct BodyRepr {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    radius: f64,
}

impl TryFrom<BodyRepr> for ConvexBody {
    type Error = GeometryError;
    fn try_from(r: BodyRepr) -> Result<Self, GeometryError> {
        ConvexBody::new(r.dim, r.vertices, r.radius)
    }
}

impl From<ConvexBody> for BodyRepr {
    fn from(b: ConvexBody) -> Self {
        BodyRepr {
            dim: b.dim,
            vertices: b.vertices,
            radius: b.radius,
        }
    }
}

impl ConvexBody {
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>, radius: f64) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if dim > MAX_BODY_DIM {
            return Err(GeometryError::DimensionTooHigh(dim));
        }
        if vertices.is_empty() {
            return Err(GeometryError::NoVertices);
        }
        if vertices.len() > MAX_VERTICES {
            return Err(GeometryError::TooManyVertices(vertices.len()));
        }
        for v in &vertices {
            check_dim(dim, v.len())?;
            if v.iter().any(|c| !c.is_finite()) {
                return Err(GeometryError::NonFinite);
            }
        }
        if !radius.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if radius < 0.0 {
            return Err(GeometryError::NegativeRadius);
        }
        let mut vertices = vertices;
        vertices.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        vertices.dedup();
        Ok(ConvexBody {
            dim,
            vertices,
            radius,
        })
    }

    pub fn point(x: Vec<f64>) -> Result<Self, GeometryError> {
        ConvexBody::new(x.len(), vec![x], 0.0)
    }

    /// The ball `B_ρ(center)`.
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self, GeometryError> {
        ConvexBody::new(center.len(), vec![center], radius)
    }

    /// The interval `(lo, hi)` on the line.
    pub fn interval(lo: f64, hi: f64) -> Result<Self, GeometryError> {
        ConvexBody::new(1, vec![vec![lo], vec![hi]], 0.0)
    }

    /// The axis-aligned box with the given corners.
    pub fn aabb(lo: &[f64], hi: &[f64]) -> Result<Self, GeometryError> {
        check_dim(lo.len(), hi.len())?;
        let d = lo.len();
        if d > MAX_BODY_DIM {
            return Err(GeometryError::DimensionTooHigh(d));
        }
        let corners = (0..1usize << d)
            .map(|mask| (0..d).map(|j| if mask >> j & 1 == 1 { hi[j] } else { lo[j] }).collect())
            .collect();
        ConvexBody::new(d, corners, 0.0)
    }

    /// The closure of a box atom's support.
    pub fn from_atom(atom: &BoxAtom) -> Result<Self, GeometryError> {
        ConvexBody::new(atom.dim(), atom.corners(), 0.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn translate(&self, y: &[f64]) -> Result<ConvexBody, GeometryError> {
        check_dim(self.dim, y.len())?;
        ConvexBody::new(self.dim, self.vertices.iter().map(|v| add(v, y)).collect(), self.radius)
    }

    /// `−K`.
    pub fn negated(&self) -> ConvexBody {
        let vertices = self.vertices.iter().map(|v| v.iter().map(|c| -c).collect()).collect();
        ConvexBody::new(self.dim, vertices, self.radius).expect("negation keeps validity")
    }

    /// `K = −K`, decided on the vertex set.
    pub fn is_symmetric(&self) -> bool {
        let neg = self.negated();
        let tol = tolerance::GEOMETRY * (1.0 + self.extent());
        self.vertices.len() == neg.vertices.len()
            && self.vertices.iter().all(|v| {
                neg.vertices
                    .iter()
                    .any(|w| norm(&sub(v, w)) <= tol)
            })
    }

    fn extent(&self) -> f64 {
        self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    /// `ch(⋃_y (K + y)) = K ⊕ ch(offsets)`.
    pub fn hull_of_translates(&self, offsets: &[Vec<f64>]) -> Result<ConvexBody, GeometryError> {
        if offsets.is_empty() {
            return Err(GeometryError::NoOffsets);
        }
        let mut vertices = Vec::with_capacity(self.vertices.len() * offsets.len());
        for y in offsets {
            check_dim(self.dim, y.len())?;
            for v in &self.vertices {
                vertices.push(add(v, y));
            }
        }
        ConvexBody::new(self.dim, vertices, self.radius)
    }

    /// `ch(K₁ ∪ K₂)` for bodies swept by the same radius.
    pub fn hull_of_union(&self, other: &ConvexBody) -> Result<ConvexBody, GeometryError> {
        check_dim(self.dim, other.dim)?;
        if (self.radius - other.radius).abs() > tolerance::GEOMETRY {
            return Err(GeometryError::UnequalRadii);
        }
        let vertices = self.vertices.iter().chain(&other.vertices).cloned().collect();
        ConvexBody::new(self.dim, vertices, self.radius)
    }

    /// `max |u − v| + 2ρ` over vertex pairs.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, u) in self.vertices.iter().enumerate() {
            for v in &self.vertices[i + 1..] {
                best = best.max(norm(&sub(u, v)));
            }
        }
        best + 2.0 * self.radius
    }

    /// `(min, max)` per axis of the closed body.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for j in 0..self.dim {
                lo[j] = lo[j].min(v[j] - self.radius);
                hi[j] = hi[j].max(v[j] + self.radius);
            }
        }
        (lo, hi)
    }

    /// Distance from `x` to the polytope core `ch(vertices)`.
    fn core_distance(&self, x: &[f64]) -> f64 {
        if self.dim == 1 {
            let (lo, hi) = self.span_1d();
            return (lo - x[0]).max(x[0] - hi).max(0.0);
        }
        if self.vertices.len() == 1 {
            return norm(&sub(x, &self.vertices[0]));
        }
        minnorm::point_hull_distance(x, &self.vertices)
    }

    fn span_1d(&self) -> (f64, f64) {
        let lo = self.vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
        let hi = self.vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// `x` lies in the closed body (within the geometry tolerance).
    pub fn contains_closed(&self, x: &[f64]) -> Result<bool, GeometryError> {
        check_dim(self.dim, x.len())?;
        Ok(self.core_distance(x) <= self.radius + tolerance::GEOMETRY)
    }

    /// `x` lies in the open body (strictly inside, by the geometry margin).
    pub fn contains_open(&self, x: &[f64]) -> Result<bool, GeometryError> {
        check_dim(self.dim, x.len())?;
        if self.radius > tolerance::GEOMETRY {
            return Ok(self.core_distance(x) < self.radius - tolerance::GEOMETRY);
        }
        if self.dim == 1 {
            let (lo, hi) = self.span_1d();
            return Ok(lo + tolerance::GEOMETRY < x[0] && x[0] < hi - tolerance::GEOMETRY);
        }
        // A polytope contains a neighbourhood of x iff it contains the
        // cross-polytope of axis probes around x.
        let eps = 1e-7 * (1.0 + self.extent());
        let tight = tolerance::GEOMETRY * 1e-2;
        let mut probe = x.to_vec();
        for j in 0..self.dim {
            for s in [-eps, eps] {
                probe[j] = x[j] + s;
                if self.core_distance(&probe) > tight {
                    return Ok(false);
                }
            }
            probe[j] = x[j];
        }
        Ok(true)
    }

    /// `other ⊆ self` as closed sets. Exact when `other` is a polytope;
    /// a sufficient test when both carry a radius.
    pub fn contains_body(&self, other: &ConvexBody) -> Result<bool, GeometryError> {
        check_dim(self.dim, other.dim)?;
        let slack = self.radius - other.radius;
        if slack < -tolerance::GEOMETRY {
            return Ok(false);
        }
        Ok(other
            .vertices
            .iter()
            .all(|v| self.core_distance(v) <= slack + tolerance::GEOMETRY))
    }

    /// `point_in_hull` on the polytope core: exhaustive barycentric search
    /// for small inputs, the min-norm point otherwise.
    pub fn core_contains(&self, x: &[f64]) -> Result<bool, GeometryError> {
        check_dim(self.dim, x.len())?;
        let tol = tolerance::GEOMETRY * (1.0 + self.extent());
        if self.vertices.len() <= 8 && self.dim <= 3 {
            Ok(minnorm::in_hull_barycentric(x, &self.vertices, tol))
        } else {
            Ok(self.core_distance(x) <= tol)
        }
    }
}

/// `dist(K₁ ⊕ ρ₁, K₂ ⊕ ρ₂) = max(0, dist(K₁, K₂) − ρ₁ − ρ₂)`.
pub fn distance(a: &ConvexBody, b: &ConvexBody) -> Result<f64, GeometryError> {
    check_dim(a.dim, b.dim)?;
    let core = if a.dim == 1 {
        let (alo, ahi) = a.span_1d();
        let (blo, bhi) = b.span_1d();
        (blo - ahi).max(alo - bhi).max(0.0)
    } else {
        minnorm::hull_distance(&a.vertices, &b.vertices)
    };
    Ok((core - a.radius - b.radius).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_balls() {
        let a = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let b = ConvexBody::ball(vec![3.0, 4.0], 1.0).unwrap();
        assert!((distance(&a, &b).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn diameters() {
        assert_eq!(ConvexBody::ball(vec![1.0], 1.0).unwrap().diameter(), 2.0);
        let sq = ConvexBody::aabb(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((sq.diameter() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn interval_hull_of_translates() {
        let base = ConvexBody::interval(-1.0, 1.0).unwrap();
        let h = base.hull_of_translates(&[vec![-3.0], vec![3.0]]).unwrap();
        assert_eq!(h.diameter(), 8.0);
        assert!(h.contains_closed(&[-4.0]).unwrap());
        assert!(!h.contains_open(&[-4.0]).unwrap());
        assert_eq!(base.hull_of_translates(&[vec![0.0]]).unwrap(), base);
        assert!(base.hull_of_translates(&[]).is_err());
    }

    #[test]
    fn overlapping_bodies_have_zero_distance() {
        let a = ConvexBody::aabb(&[0.0, 0.0], &[2.0, 2.0]).unwrap();
        let b = ConvexBody::ball(vec![2.5, 1.0], 1.0).unwrap();
        assert_eq!(distance(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn open_membership_in_the_plane() {
        let sq = ConvexBody::aabb(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!(sq.contains_open(&[0.5, 0.5]).unwrap());
        assert!(!sq.contains_open(&[1.0, 0.5]).unwrap());
        assert!(sq.contains_closed(&[1.0, 0.5]).unwrap());
        let seg = ConvexBody::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]], 0.0).unwrap();
        assert!(!seg.contains_open(&[0.5, 0.0]).unwrap());
    }

    #[test]
    fn containment_of_bodies() {
        let ball = ConvexBody::ball(vec![0.5], 0.75).unwrap();
        assert!(ball.contains_body(&ConvexBody::interval(0.0, 1.0).unwrap()).unwrap());
        assert!(!ball.contains_body(&ConvexBody::interval(0.0, 1.5).unwrap()).unwrap());
    }

    #[test]
    fn symmetry_and_union() {
        let u1 = ConvexBody::interval(-1.5, 1.5).unwrap();
        let u0 = ConvexBody::interval(4.5, 5.5).unwrap();
        assert!(u1.is_symmetric());
        assert!(!u0.is_symmetric());
        let d = u1.hull_of_union(&u0.negated()).unwrap();
        assert_eq!(d.diameter(), 7.0);
        assert!((distance(&d, &u0).unwrap() - 3.0).abs() < 1e-15);
        let ball = ConvexBody::ball(vec![0.0], 1.0).unwrap();
        assert!(matches!(u1.hull_of_union(&ball), Err(GeometryError::UnequalRadii)));
    }

    #[test]
    fn json_validation() {
        let b: ConvexBody = serde_json::from_str(r#"{"dim":2,"vertices":[[0,0],[1,2]],"radius":0.5}"#).unwrap();
        assert_eq!(b.vertices().len(), 2);
        assert!(serde_json::from_str::<ConvexBody>(r#"{"dim":2,"vertices":[[0]],"radius":0}"#).is_err());
        assert!(serde_json::from_str::<ConvexBody>(r#"{"dim":1,"vertices":[[0]],"radius":-1}"#).is_err());
        assert!(serde_json::from_str::<ConvexBody>(r#"{"dim":1,"vertices":[],"radius":1}"#).is_err());
    }
}
