use std::collections::BTreeMap;
use std::f64::consts::PI;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Integer, One, ToPrimitive};
use serde::Serialize;

use super::{check_dim, BoxSignal, ContinuousError, ContinuousSignal, RatPoint};
use super::MAX_GRID_POINTS;
use crate::lattice::{
    compare_fourier_magnitude, dft_eval, find_association, search_association, AssociationKind,
    AssociationWitness, LatticePoint, LatticeSignal, MagnitudeComparison, MAX_COORD,
};
use crate::scalar::Scalar;
use crate::tolerance;

/// `ŵ(p) = (2π)^{-d} ∫ e^{ip·x} w(x) dx`, in closed form.
///
/// A box atom contributes `c · e^{ip·center} · Π_j 2 sin(p_j h_j)/p_j`; a
/// delta train reduces to the lattice transform.
pub fn ft_eval(w: &ContinuousSignal, p: &[f64]) -> Result<Complex64, ContinuousError> {
    check_dim(w.dim(), p.len())?;
    match w {
        ContinuousSignal::Train(v) => Ok(dft_eval(v, p)?),
        ContinuousSignal::Boxes(b) => Ok(box_transform(b, p)),
    }
}

fn box_transform(b: &BoxSignal, p: &[f64]) -> Complex64 {
    let sum: Complex64 = b
        .atoms()
        .iter()
        .map(|(atom, c)| {
            let center = atom.center_f64();
            let phase: f64 = center.iter().zip(p).map(|(x, q)| x * q).sum();
            let envelope: f64 = atom
                .halfwidth_f64()
                .iter()
                .zip(p)
                .map(|(&h, &q)| if q == 0.0 { 2.0 * h } else { 2.0 * (q * h).sin() / q })
                .product();
            c.to_c64() * Complex64::from_polar(envelope, phase)
        })
        .sum();
    sum * (2.0 * PI).powi(-(b.dim() as i32))
}

/// The lattice signal `v` of a delta train `u = Σ v(y) δ(· − y)`.
pub fn lattice_reduce(w: &ContinuousSignal) -> Result<LatticeSignal, ContinuousError> {
    match w {
        ContinuousSignal::Train(v) => Ok(v.clone()),
        ContinuousSignal::Boxes(b) if b.is_empty() => Ok(LatticeSignal::zero(b.dim())?),
        ContinuousSignal::Boxes(_) => Err(ContinuousError::NotDeltaTrain),
    }
}

/// Exact comparison of `|f̂|²` and `|ĝ|²` when it reduces to the lattice.
///
/// Delta trains compare directly. Box signals whose atoms all share one
/// halfwidth factor as `|χ̂|² · |Σ c_k e^{ip·x_k}|²`; after scaling the
/// centers by the common denominator the second factor is a lattice
/// magnitude. Returns `None` when neither applies.
pub fn exact_magnitude(
    f: &ContinuousSignal,
    g: &ContinuousSignal,
) -> Result<Option<MagnitudeComparison>, ContinuousError> {
    check_dim(f.dim(), g.dim())?;
    match (f, g) {
        (ContinuousSignal::Train(a), ContinuousSignal::Train(b)) => {
            Ok(Some(compare_fourier_magnitude(a, b)?))
        }
        (ContinuousSignal::Boxes(a), ContinuousSignal::Boxes(b)) => {
            let mut widths = a.atoms().keys().chain(b.atoms().keys()).map(|x| x.halfwidth());
            if let Some(first) = widths.next() {
                if !widths.all(|h| h == first) {
                    return Ok(None);
                }
            }
            let mut den = BigInt::one();
            for atom in a.atoms().keys().chain(b.atoms().keys()) {
                for c in atom.center() {
                    den = den.lcm(c.denom());
                }
            }
            match (center_train(a, &den), center_train(b, &den)) {
                (Some(x), Some(y)) => Ok(Some(compare_fourier_magnitude(&x, &y)?)),
                _ => Ok(None),
            }
        }
        _ => Ok(None),
    }
}

fn center_train(b: &BoxSignal, den: &BigInt) -> Option<LatticeSignal> {
    let scale = BigRational::from_integer(den.clone());
    let entries = b
        .atoms()
        .iter()
        .map(|(atom, c)| {
            let coords = atom
                .center()
                .iter()
                .map(|x| {
                    let v = (x * &scale).to_integer().to_i64()?;
                    (v.abs() <= MAX_COORD).then_some(v)
                })
                .collect::<Option<Vec<i64>>>()?;
            Some((LatticePoint::new(coords), c.clone()))
        })
        .collect::<Option<Vec<_>>>()?;
    LatticeSignal::from_entries(b.dim(), entries).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledComparison {
    /// `max ||f̂|² − |ĝ|²| ≤ 1e-10 · peak` and `peak > 0`.
    pub equal: bool,
    pub max_deviation: f64,
    /// `max |f̂|²` over the grid.
    pub peak: f64,
    /// Half-side `Π` of the sampled cube `[−Π, Π)^d`.
    pub span: f64,
    pub points: usize,
}

/// Samples `|f̂|² − |ĝ|²` on `grid^d` points of `[−Π, Π)^d`.
///
/// `Π = 4π / h_min` for box atoms (four sinc lobes on the narrowest axis)
/// and `π` for delta trains, whose transforms are `2π`-periodic.
pub fn sampled_magnitude(
    f: &ContinuousSignal,
    g: &ContinuousSignal,
    grid: usize,
) -> Result<SampledComparison, ContinuousError> {
    let d = f.dim();
    check_dim(d, g.dim())?;
    if grid < 2 {
        return Err(ContinuousError::DegenerateGrid);
    }
    let points = u32::try_from(d)
        .ok()
        .and_then(|e| grid.checked_pow(e))
        .filter(|&n| n <= MAX_GRID_POINTS)
        .ok_or(ContinuousError::GridTooLarge(grid))?;
    let h_min = [f, g]
        .iter()
        .filter_map(|w| w.as_boxes().and_then(BoxSignal::min_halfwidth))
        .reduce(f64::min);
    let span = h_min.map_or(PI, |h| 4.0 * PI / h);
    let step = 2.0 * span / grid as f64;
    let mut p = vec![0.0; d];
    let (mut max_deviation, mut peak) = (0.0f64, 0.0f64);
    for k in 0..points {
        let mut rest = k;
        for q in p.iter_mut() {
            *q = -span + step * (rest % grid) as f64;
            rest /= grid;
        }
        let a = ft_eval(f, &p)?.norm_sqr();
        let b = ft_eval(g, &p)?.norm_sqr();
        max_deviation = max_deviation.max((a - b).abs());
        peak = peak.max(a);
    }
    Ok(SampledComparison {
        equal: peak > 0.0 && max_deviation <= tolerance::SAMPLED_REL * peak,
        max_deviation,
        peak,
        span,
        points,
    })
}

pub fn sampled_magnitude_equal(
    f: &ContinuousSignal,
    g: &ContinuousSignal,
    grid: usize,
) -> Result<bool, ContinuousError> {
    Ok(sampled_magnitude(f, g, grid)?.equal)
}

fn modulus_equal_maps<K: Ord>(a: &BTreeMap<K, Scalar>, b: &BTreeMap<K, Scalar>) -> bool {
    if a.len() != b.len() || !a.keys().eq(b.keys()) {
        return false;
    }
    let scale = a.values().chain(b.values()).map(Scalar::abs).fold(0.0, f64::max);
    let tol = tolerance::ASSOCIATION_REL * scale.max(f64::MIN_POSITIVE);
    a.values().zip(b.values()).all(|(x, y)| match (x, y) {
        (Scalar::Exact(_), Scalar::Exact(_)) => x.norm_sqr() == y.norm_sqr(),
        _ => (x.abs() - y.abs()).abs() <= tol,
    })
}

/// `|f(x)| = |g(x)|` everywhere.
///
/// With pairwise disjoint atoms this holds iff both signals use the same atoms
/// and matching coefficients have equal modulus.
pub fn pointwise_modulus_equal(
    f: &ContinuousSignal,
    g: &ContinuousSignal,
) -> Result<bool, ContinuousError> {
    check_dim(f.dim(), g.dim())?;
    match (f, g) {
        (ContinuousSignal::Train(a), ContinuousSignal::Train(b)) => {
            Ok(modulus_equal_maps(a.entries(), b.entries()))
        }
        (ContinuousSignal::Boxes(a), ContinuousSignal::Boxes(b)) => {
            if a.is_overlapping() || b.is_overlapping() {
                return Err(ContinuousError::OverlappingAtoms);
            }
            Ok(modulus_equal_maps(a.atoms(), b.atoms()))
        }
        _ => Err(ContinuousError::MixedRepresentation),
    }
}

/// Association search on `R^d`, trying shifts first.
pub fn find_continuous_association(
    f: &ContinuousSignal,
    g: &ContinuousSignal,
) -> Result<Option<AssociationWitness<RatPoint>>, ContinuousError> {
    check_dim(f.dim(), g.dim())?;
    if f.is_zero() || g.is_zero() {
        return Err(ContinuousError::ZeroSignal);
    }
    match (f, g) {
        (ContinuousSignal::Train(a), ContinuousSignal::Train(b)) => {
            Ok(find_association(a, b)?.map(|w| AssociationWitness {
                kind: w.kind,
                phase: w.phase,
                alpha: w.alpha,
                shift: w
                    .shift
                    .coords()
                    .iter()
                    .map(|&c| BigRational::from_integer(c.into()))
                    .collect(),
            }))
        }
        (ContinuousSignal::Boxes(a), ContinuousSignal::Boxes(b)) => {
            let uniform = match (a.uniform_halfwidth(), b.uniform_halfwidth()) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            };
            if (a.is_overlapping() || b.is_overlapping()) && !uniform {
                return Err(ContinuousError::AmbiguousRepresentation);
            }
            Ok(search_association(a.atoms(), b.atoms(), AssociationKind::Shift)
                .or_else(|| search_association(a.atoms(), b.atoms(), AssociationKind::ConjReflect)))
        }
        _ => Ok(None),
    }
}

/// Applies a witness to `f`; reproduces the associated signal.
pub fn apply_witness(
    w: &AssociationWitness<RatPoint>,
    f: &ContinuousSignal,
) -> Result<ContinuousSignal, ContinuousError> {
    let base = match w.kind {
        AssociationKind::Shift => f.clone(),
        AssociationKind::ConjReflect => f.conj_reflect(),
    };
    Ok(base.translate(&w.shift)?.scale(&w.phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::{apply_continuous, apply_continuous_adjoint, BoxAtom, ContinuousStencil};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v, 0)
    }

    fn chi(c: i64, h: (i64, i64)) -> BoxAtom {
        BoxAtom::new(vec![r(c, 1)], vec![r(h.0, h.1)]).unwrap()
    }

    fn boxes(atoms: Vec<(BoxAtom, Scalar)>) -> ContinuousSignal {
        BoxSignal::new(1, atoms, false).unwrap().into()
    }

    /// Continuous pair for `a = (1, 2)`, `b = (1, 3)`, `y = 1`, `z = 2`, `r = 1/4`.
    fn example_pair() -> (ContinuousSignal, ContinuousSignal) {
        let st = ContinuousStencil::new(1, [(vec![r(0, 1)], s(1)), (vec![r(1, 1)], s(2))]).unwrap();
        let psi = boxes(vec![(chi(0, (1, 4)), s(1)), (chi(2, (1, 4)), s(3))]);
        (
            apply_continuous(&st, &psi).unwrap(),
            apply_continuous_adjoint(&st, &psi).unwrap(),
        )
    }

    #[test]
    fn unit_box_transform() {
        let w = boxes(vec![(chi(0, (1, 2)), s(1))]);
        let v = ft_eval(&w, &[0.0]).unwrap();
        assert!((v - Complex64::new(1.0 / (2.0 * PI), 0.0)).norm() < 1e-15);
        assert!(ft_eval(&w, &[2.0 * PI]).unwrap().norm() < 1e-15);
    }

    #[test]
    fn shift_modulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = boxes(vec![(chi(0, (1, 3)), Scalar::from_int(2, -1))]);
        let c = r(17, 5);
        let moved = base.translate(&[c.clone()]).unwrap();
        for _ in 0..64 {
            let p = rng.gen_range(-20.0..20.0);
            let lhs = ft_eval(&moved, &[p]).unwrap();
            let rhs = Complex64::from_polar(1.0, 3.4 * p) * ft_eval(&base, &[p]).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300));
        }
    }

    #[test]
    fn delta_train_matches_lattice() {
        let d0: ContinuousSignal = LatticeSignal::delta(LatticePoint::origin(2), s(1)).into();
        let v = ft_eval(&d0, &[0.4, 1.1]).unwrap();
        assert!((v.re - (2.0 * PI).powi(-2)).abs() < 1e-16 && v.im.abs() < 1e-16);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let lat = LatticeSignal::from_values_1d(-1, &[s(2), s(1), s(6), s(3)]);
        let train = ContinuousSignal::delta_train(lat.clone());
        let back = lattice_reduce(&train).unwrap();
        assert_eq!(back, lat);
        for _ in 0..64 {
            let p = [rng.gen_range(-PI..PI)];
            let a = ft_eval(&train, &p).unwrap().norm();
            let b = dft_eval(&back, &p).unwrap().norm();
            assert!((a - b).abs() <= 1e-12);
        }
        let empty = BoxSignal::zero(1).unwrap().into();
        assert!(lattice_reduce(&empty).unwrap().is_zero());
        assert!(matches!(
            lattice_reduce(&boxes(vec![(chi(0, (1, 2)), s(1))])),
            Err(ContinuousError::NotDeltaTrain)
        ));
    }

    #[test]
    fn example_pair_magnitudes() {
        let (f, g) = example_pair();
        let cmp = sampled_magnitude(&f, &g, 4096).unwrap();
        assert!(cmp.equal, "{cmp:?}");
        assert_eq!(cmp.span, 16.0 * PI);
        let exact = exact_magnitude(&f, &g).unwrap().unwrap();
        assert!(exact.equal && exact.exact);
        assert!(find_continuous_association(&f, &g).unwrap().is_none());
        assert!(!sampled_magnitude_equal(&f, &f.scale(&s(2)), 4096).unwrap());
    }

    #[test]
    fn shifted_copy_has_same_magnitude() {
        let (f, _) = example_pair();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let a = r(rng.gen_range(-400..400), 97);
            let moved = f.translate(&[a.clone()]).unwrap();
            assert!(sampled_magnitude_equal(&f, &moved, 4096).unwrap());
            let w = find_continuous_association(&f, &moved).unwrap().unwrap();
            assert_eq!(w.shift, vec![a]);
            assert!(apply_witness(&w, &f).unwrap().same_as(&moved));
        }
    }

    #[test]
    fn mixed_halfwidths_skip_the_exact_route() {
        let f = boxes(vec![(chi(0, (1, 4)), s(1)), (chi(3, (1, 3)), s(2))]);
        assert!(exact_magnitude(&f, &f).unwrap().is_none());
        assert!(sampled_magnitude_equal(&f, &f.conj_reflect(), 1024).unwrap());
    }

    #[test]
    fn pointwise_modulus() {
        let (f, _) = example_pair();
        let rotated = f.scale(&Scalar::ratio(3, 5, 4, 5));
        assert!(pointwise_modulus_equal(&f, &rotated).unwrap());
        let b = f.as_boxes().unwrap();
        let first = b.atoms().keys().next().unwrap().clone();
        let doubled: ContinuousSignal = b
            .add(&BoxSignal::new(1, [(first, b.atoms().values().next().unwrap().clone())], false).unwrap())
            .unwrap()
            .into();
        assert!(!pointwise_modulus_equal(&f, &doubled).unwrap());
        let over: ContinuousSignal =
            BoxSignal::new(1, [(chi(0, (1, 1)), s(1)), (chi(1, (1, 1)), s(1))], true).unwrap().into();
        assert!(matches!(
            pointwise_modulus_equal(&over, &over),
            Err(ContinuousError::OverlappingAtoms)
        ));
    }

    #[test]
    fn grid_guards() {
        let (f, g) = example_pair();
        assert!(matches!(sampled_magnitude(&f, &g, 1), Err(ContinuousError::DegenerateGrid)));
        assert!(matches!(
            sampled_magnitude(&f, &g, MAX_GRID_POINTS + 1),
            Err(ContinuousError::GridTooLarge(_))
        ));
    }
}
