use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

use super::{require, Condition, ConstructionError};
use crate::continuous::{BoxAtom, BoxSignal, RatPoint};
use crate::lattice::{LatticePoint, LatticeSignal};
use crate::scalar::Scalar;
use crate::signal::{lattice_point, Mode, Signal};

/// Largest number of lattice points enumerated for one indicator.
const MAX_INDICATOR_POINTS: usize = 1 << 20;

/// `coef · χ_r(x − center)`. On `Z^d` this is the set of integer points with
/// `|x − center| < r`; on `R^d` it is an interval for `d = 1` and the cube of
/// halfwidth `r` for `d ≥ 2`.
pub fn chi(
    mode: Mode,
    center: &RatPoint,
    r: &BigRational,
    coef: &Scalar,
) -> Result<Signal, ConstructionError> {
    require(r.is_positive(), Condition::PositiveRadius, || format!("r = {r}"))?;
    let dim = center.len();
    match mode {
        Mode::Continuous => Ok(BoxSignal::new(
            dim,
            [(BoxAtom::cube(center.clone(), r.clone())?, coef.clone())],
            false,
        )?
        .into()),
        Mode::Discrete => {
            let c = lattice_point(center)?;
            let k = r.ceil().to_integer().to_i64().unwrap_or(i64::MAX);
            let side = 2 * k.min(1 << 20) as u128 + 1;
            if side.checked_pow(dim as u32).map_or(true, |n| n > MAX_INDICATOR_POINTS as u128) {
                return Err(ConstructionError::Inconsistent(format!(
                    "indicator of radius {r} in dimension {dim} is too large to enumerate"
                )));
            }
            let r2 = r * r;
            let mut points = Vec::new();
            let mut x = vec![-k; dim];
            loop {
                let n2: i64 = x.iter().map(|v| v * v).sum();
                if BigRational::from_integer(n2.into()) < r2 {
                    points.push((&LatticePoint::new(x.clone()) + &c, coef.clone()));
                }
                let mut j = 0;
                loop {
                    if j == dim {
                        let v = LatticeSignal::from_entries(dim, points)?;
                        return Ok(v.into());
                    }
                    if x[j] < k {
                        x[j] += 1;
                        break;
                    }
                    x[j] = -k;
                    j += 1;
                }
            }
        }
    }
}

/// `b₁χ_r(x) + b₂χ_r(x − z)`.
pub fn two_bumps(
    mode: Mode,
    b1: &Scalar,
    b2: &Scalar,
    z: &RatPoint,
    r: &BigRational,
) -> Result<Signal, ConstructionError> {
    let origin = vec![BigRational::zero(); z.len()];
    let first = chi(mode, &origin, r, b1)?;
    let second = chi(mode, z, r, b2)?;
    match (&first, &second) {
        (Signal::Continuous(a), Signal::Continuous(b)) => {
            let (a, b) = (a.as_boxes().expect("boxes"), b.as_boxes().expect("boxes"));
            let atoms = a
                .atoms()
                .iter()
                .chain(b.atoms())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect::<Vec<_>>();
            Ok(BoxSignal::new(z.len(), atoms, true)?.into())
        }
        _ => Ok(first.add(&second)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn discrete_indicator_counts() {
        let one = Scalar::one();
        let o2 = vec![rat(0, 1), rat(0, 1)];
        assert_eq!(chi(Mode::Discrete, &o2, &rat(1, 2), &one).unwrap().len(), 1);
        // |x| < 3/2 in Z²: origin, 4 axis points, 4 diagonals (|x|² = 2 < 9/4).
        assert_eq!(chi(Mode::Discrete, &o2, &rat(3, 2), &one).unwrap().len(), 9);
        // |x| < 1 keeps only the origin: the axis points sit on the sphere.
        assert_eq!(chi(Mode::Discrete, &o2, &rat(1, 1), &one).unwrap().len(), 1);
    }

    #[test]
    fn overlapping_bumps_are_declared() {
        let psi = two_bumps(
            Mode::Continuous,
            &Scalar::one(),
            &Scalar::from_int(3, 0),
            &vec![rat(1, 2)],
            &rat(1, 2),
        )
        .unwrap();
        assert_eq!(psi.len(), 2);
        let Signal::Continuous(c) = psi else { panic!() };
        assert!(c.as_boxes().unwrap().is_overlapping());
    }

    #[test]
    fn nonpositive_radius_rejected() {
        let e = chi(Mode::Discrete, &vec![rat(0, 1)], &rat(0, 1), &Scalar::one()).unwrap_err();
        assert_eq!(e.condition(), Some(Condition::PositiveRadius));
    }
}
