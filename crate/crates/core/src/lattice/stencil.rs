use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::signal::{check_point, EntryRepr};
use super::{check_dim, LatticeError, LatticePoint, LatticeSignal};
use crate::scalar::Scalar;

/// A finite difference operator `(Aψ)(x) = Σ_{y∈T} a_y ψ(x + y)` on `Z^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StencilRepr", into = "StencilRepr")]
pub struct Stencil {
    dim: usize,
    taps: BTreeMap<LatticePoint, Scalar>,
}

impl Stencil {
    pub fn new<I>(dim: usize, taps: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = (LatticePoint, Scalar)>,
    {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        let mut map = BTreeMap::new();
        for (y, a) in taps {
            check_point(dim, &y)?;
            if !a.is_finite() {
                return Err(LatticeError::NonFinite);
            }
            if a.is_zero() {
                return Err(LatticeError::ZeroTap(y));
            }
            if map.contains_key(&y) {
                return Err(LatticeError::DuplicatePoint(y));
            }
            map.insert(y, a);
        }
        if map.is_empty() {
            return Err(LatticeError::EmptyStencil);
        }
        Ok(Stencil { dim, taps: map })
    }

    pub fn identity(dim: usize) -> Self {
        Stencil::new(dim, [(LatticePoint::origin(dim), Scalar::one())]).expect("identity stencil")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn taps(&self) -> &BTreeMap<LatticePoint, Scalar> {
        &self.taps
    }

    pub fn offsets(&self) -> impl Iterator<Item = &LatticePoint> {
        self.taps.keys()
    }

    pub fn coef(&self, y: &LatticePoint) -> Option<&Scalar> {
        self.taps.get(y)
    }

    pub fn is_exact(&self) -> bool {
        self.taps.values().all(Scalar::is_exact)
    }

    /// `T = −T`.
    pub fn is_symmetric(&self) -> bool {
        self.taps.keys().all(|y| self.taps.contains_key(&-y))
    }

    /// The kernel `σ(x) = Σ a_y δ(x + y)`, supported on `−T`.
    ///
    /// The `(2π)^d` normalisation is omitted; it is a positive real factor
    /// and does not affect association.
    pub fn symbol_signal(&self) -> LatticeSignal {
        LatticeSignal::from_entries(self.dim, self.taps.iter().map(|(y, a)| (-y, a.clone())))
            .expect("taps are distinct and nonzero")
    }
}

/// `Σ_{y∈T} a_y ψ(· + y)`.
pub fn apply_stencil(s: &Stencil, psi: &LatticeSignal) -> Result<LatticeSignal, LatticeError> {
    check_dim(s.dim, psi.dim())?;
    let terms = s
        .taps
        .iter()
        .flat_map(|(y, a)| psi.iter().map(move |(x, v)| (x - y, a * v)));
    Ok(LatticeSignal::accumulate(s.dim, terms))
}

/// `Σ_{y∈T} conj(a_y) ψ(· − y)`.
pub fn apply_adjoint(s: &Stencil, psi: &LatticeSignal) -> Result<LatticeSignal, LatticeError> {
    check_dim(s.dim, psi.dim())?;
    let terms = s
        .taps
        .iter()
        .flat_map(|(y, a)| psi.iter().map(move |(x, v)| (x + y, a.conj() * v)));
    Ok(LatticeSignal::accumulate(s.dim, terms))
}

#[derive(Serialize, Deserialize)]
struct StencilRepr {
    dim: usize,
    taps: Vec<EntryRepr>,
}

impl TryFrom<StencilRepr> for Stencil {
    type Error = LatticeError;
    fn try_from(r: StencilRepr) -> Result<Self, LatticeError> {
        let taps = r
            .taps
            .iter()
            .map(EntryRepr::decode)
            .collect::<Result<Vec<_>, _>>()?;
        Stencil::new(r.dim, taps)
    }
}

impl From<Stencil> for StencilRepr {
    fn from(s: Stencil) -> Self {
        StencilRepr {
            dim: s.dim,
            taps: s.taps.iter().map(|(y, a)| EntryRepr::new(y, a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v, 0)
    }

    fn stencil_1d(taps: &[(i64, Scalar)]) -> Stencil {
        Stencil::new(1, taps.iter().map(|(y, a)| (LatticePoint::from(*y), a.clone()))).unwrap()
    }

    /// Direct convolution oracle: evaluates `Σ a_y ψ(x+y)` pointwise over a
    /// window that covers every possible output point.
    fn brute_force_apply(taps: &[(i64, i64)], psi: &[(i64, i64)], adjoint: bool) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in -20..=20 {
            let mut acc = 0;
            for &(y, a) in taps {
                let src = if adjoint { x - y } else { x + y };
                for &(p, v) in psi {
                    if p == src {
                        acc += a * v;
                    }
                }
            }
            if acc != 0 {
                out.push((x, acc));
            }
        }
        out
    }

    fn as_pairs(w: &LatticeSignal) -> Vec<(i64, i64)> {
        w.iter()
            .map(|(x, v)| {
                let c = v.to_c64();
                assert_eq!(c.im, 0.0);
                (x.coords()[0], c.re as i64)
            })
            .collect()
    }

    #[test]
    fn identity_stencil_is_identity() {
        let psi = LatticeSignal::from_values_1d(-2, &[s(4), Scalar::from_int(0, 1), s(7)]);
        assert_eq!(apply_stencil(&Stencil::identity(1), &psi).unwrap(), psi);
    }

    #[test]
    fn two_tap_example_matches_oracle() {
        let st = stencil_1d(&[(0, s(1)), (1, s(2))]);
        let psi = LatticeSignal::from_entries(1, [(0.into(), s(1)), (2.into(), s(3))]).unwrap();
        let f = apply_stencil(&st, &psi).unwrap();
        let oracle = brute_force_apply(&[(0, 1), (1, 2)], &[(0, 1), (2, 3)], false);
        assert_eq!(as_pairs(&f), oracle);
        assert_eq!(oracle, vec![(-1, 2), (0, 1), (1, 6), (2, 3)]);

        let g = apply_adjoint(&st, &psi).unwrap();
        let oracle = brute_force_apply(&[(0, 1), (1, 2)], &[(0, 1), (2, 3)], true);
        assert_eq!(as_pairs(&g), oracle);
        assert_eq!(oracle, vec![(0, 1), (1, 2), (2, 3), (3, 6)]);
    }

    #[test]
    fn cancellation_is_pruned() {
        let st = stencil_1d(&[(0, s(1)), (1, s(-1))]);
        let psi = LatticeSignal::from_values_1d(0, &[s(1), s(1)]);
        let f = apply_stencil(&st, &psi).unwrap();
        let oracle = brute_force_apply(&[(0, 1), (1, -1)], &[(0, 1), (1, 1)], false);
        assert_eq!(as_pairs(&f), oracle);
        assert_eq!(oracle, vec![(-1, -1), (1, 1)]);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn adjoint_of_single_imaginary_tap() {
        let st = stencil_1d(&[(0, Scalar::i())]);
        let psi = LatticeSignal::delta(0.into(), s(1));
        let g = apply_adjoint(&st, &psi).unwrap();
        assert_eq!(g, LatticeSignal::delta(0.into(), Scalar::from_int(0, -1)));
    }

    #[test]
    fn constructor_rejects_bad_taps() {
        assert!(matches!(Stencil::new(1, []), Err(LatticeError::EmptyStencil)));
        assert!(matches!(
            Stencil::new(1, [(LatticePoint::from(0), Scalar::zero())]),
            Err(LatticeError::ZeroTap(_))
        ));
        let st = Stencil::identity(2);
        let psi = LatticeSignal::delta(0.into(), s(1));
        assert!(matches!(apply_stencil(&st, &psi), Err(LatticeError::DimensionMismatch { .. })));
    }

    #[test]
    fn symbol_lives_on_negated_taps() {
        let st = stencil_1d(&[(0, s(1)), (3, s(2))]);
        let sigma = st.symbol_signal();
        assert_eq!(sigma.get(&LatticePoint::from(-3)), s(2));
        assert!(!st.is_symmetric());
        assert!(stencil_1d(&[(-1, s(1)), (0, s(5)), (1, s(2))]).is_symmetric());
    }
}
