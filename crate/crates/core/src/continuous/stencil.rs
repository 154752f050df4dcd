use std::collections::BTreeMap;

use num::complex::Complex64;
use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use super::signal::lattice_offset;
use super::{check_coords, check_dim, rat_neg, rat_to_f64, BoxSignal, ContinuousError};
use super::{ContinuousSignal, RatPoint};
use crate::lattice::{self, search_association, AssociationKind, Stencil};
use crate::scalar::{ratio_serde, scalar_from_parts, scalar_to_parts, Part, Scalar};

/// `(Aψ)(x) = Σ_{y∈T} a_y ψ(x + y)` with `T ⊂ R^d` (rational offsets).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StencilRepr", into = "StencilRepr")]
pub struct ContinuousStencil {
    dim: usize,
    taps: BTreeMap<RatPoint, Scalar>,
}

impl ContinuousStencil {
    pub fn new<I>(dim: usize, taps: I) -> Result<Self, ContinuousError>
    where
        I: IntoIterator<Item = (RatPoint, Scalar)>,
    {
        if dim == 0 {
            return Err(ContinuousError::ZeroDimension);
        }
        let mut map = BTreeMap::new();
        for (y, a) in taps {
            check_dim(dim, y.len())?;
            check_coords(&y)?;
            if !a.is_finite() {
                return Err(ContinuousError::NonFinite);
            }
            if a.is_zero() {
                return Err(ContinuousError::ZeroTap);
            }
            if map.insert(y, a).is_some() {
                return Err(ContinuousError::DuplicateOffset);
            }
        }
        if map.is_empty() {
            return Err(ContinuousError::EmptyStencil);
        }
        Ok(ContinuousStencil { dim, taps: map })
    }

    /// The same taps read as real offsets.
    pub fn from_lattice(s: &Stencil) -> Self {
        let taps = s
            .taps()
            .iter()
            .map(|(y, a)| {
                let v = y.coords().iter().map(|&c| BigRational::from_integer(c.into())).collect();
                (v, a.clone())
            })
            .collect();
        ContinuousStencil { dim: s.dim(), taps }
    }

    /// The lattice stencil, when every offset is an integer point.
    pub fn to_lattice(&self) -> Result<Stencil, ContinuousError> {
        let taps = self
            .taps
            .iter()
            .map(|(y, a)| Ok((lattice_offset(y)?, a.clone())))
            .collect::<Result<Vec<_>, ContinuousError>>()?;
        Ok(Stencil::new(self.dim, taps)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn taps(&self) -> &BTreeMap<RatPoint, Scalar> {
        &self.taps
    }

    pub fn coef(&self, y: &RatPoint) -> Option<&Scalar> {
        self.taps.get(y)
    }

    pub fn is_exact(&self) -> bool {
        self.taps.values().all(Scalar::is_exact)
    }

    /// `T = −T`.
    pub fn is_symmetric(&self) -> bool {
        self.taps.keys().all(|y| self.taps.contains_key(&rat_neg(y)))
    }

    /// `Σ a_y e^{−ip·y}`.
    pub fn symbol(&self, p: &[f64]) -> Result<Complex64, ContinuousError> {
        check_dim(self.dim, p.len())?;
        Ok(self
            .taps
            .iter()
            .map(|(y, a)| {
                let phase: f64 = rat_to_f64(y).iter().zip(p).map(|(u, q)| u * q).sum();
                a.to_c64() * Complex64::from_polar(1.0, -phase)
            })
            .sum())
    }

    /// The kernel `σ = Σ a_y δ(x + y)` as a map over `−T`.
    pub fn kernel(&self) -> BTreeMap<RatPoint, Scalar> {
        self.taps.iter().map(|(y, a)| (rat_neg(y), a.clone())).collect()
    }

    /// `σ = e^{iα} conj(σ(−· + y))` for some `α`, `y`.
    pub fn kernel_is_self_conj_associated(&self) -> bool {
        let k = self.kernel();
        search_association(&k, &k, AssociationKind::ConjReflect).is_some()
    }
}

fn apply_impl(
    s: &ContinuousStencil,
    w: &ContinuousSignal,
    adjoint: bool,
) -> Result<ContinuousSignal, ContinuousError> {
    check_dim(s.dim, w.dim())?;
    match w {
        ContinuousSignal::Boxes(b) => {
            let terms = s.taps.iter().flat_map(|(y, a)| {
                let (shift, coef) = if adjoint {
                    (y.clone(), a.conj())
                } else {
                    (rat_neg(y), a.clone())
                };
                b.atoms()
                    .iter()
                    .map(move |(atom, v)| (atom.translated(&shift), &coef * v))
            });
            Ok(BoxSignal::accumulate(s.dim, terms).into())
        }
        ContinuousSignal::Train(v) => {
            let st = s.to_lattice()?;
            let out = if adjoint {
                lattice::apply_adjoint(&st, v)?
            } else {
                lattice::apply_stencil(&st, v)?
            };
            Ok(out.into())
        }
    }
}

/// `Σ_{y∈T} a_y w(· + y)`: atoms move by `−y`, identical atoms merge.
pub fn apply_continuous(
    s: &ContinuousStencil,
    w: &ContinuousSignal,
) -> Result<ContinuousSignal, ContinuousError> {
    apply_impl(s, w, false)
}

/// `Σ_{y∈T} conj(a_y) w(· − y)`.
pub fn apply_continuous_adjoint(
    s: &ContinuousStencil,
    w: &ContinuousSignal,
) -> Result<ContinuousSignal, ContinuousError> {
    apply_impl(s, w, true)
}

#[derive(Serialize, Deserialize)]
struct TapRepr {
    x: Vec<Part>,
    re: Part,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Part>,
}

#[derive(Serialize, Deserialize)]
struct StencilRepr {
    dim: usize,
    taps: Vec<TapRepr>,
}

impl TryFrom<StencilRepr> for ContinuousStencil {
    type Error = ContinuousError;
    fn try_from(r: StencilRepr) -> Result<Self, ContinuousError> {
        let taps = r
            .taps
            .iter()
            .map(|t| {
                let y = t
                    .x
                    .iter()
                    .map(ratio_serde::part_to_ratio)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((y, scalar_from_parts(&t.re, t.im.as_ref())?))
            })
            .collect::<Result<Vec<_>, ContinuousError>>()?;
        ContinuousStencil::new(r.dim, taps)
    }
}

impl From<ContinuousStencil> for StencilRepr {
    fn from(s: ContinuousStencil) -> Self {
        StencilRepr {
            dim: s.dim,
            taps: s
                .taps
                .iter()
                .map(|(y, a)| {
                    let (re, im) = scalar_to_parts(a);
                    TapRepr {
                        x: y.iter().map(Part::from_ratio).collect(),
                        re,
                        im: Some(im),
                    }
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::BoxAtom;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v, 0)
    }

    fn chi(c: i64) -> BoxAtom {
        BoxAtom::new(vec![r(c, 1)], vec![r(1, 4)]).unwrap()
    }

    #[test]
    fn merged_central_atom() {
        // a = (1, 2), ψ = χ + 3χ(· − 1), z = y = 1.
        let st = ContinuousStencil::new(1, [(vec![r(0, 1)], s(1)), (vec![r(1, 1)], s(2))]).unwrap();
        let psi: ContinuousSignal =
            BoxSignal::new(1, [(chi(0), s(1)), (chi(1), s(3))], false).unwrap().into();
        let f = apply_continuous(&st, &psi).unwrap();
        let b = f.as_boxes().unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.coef(&chi(0)), s(1 + 6));
        assert_eq!(b.coef(&chi(-1)), s(2));
        assert_eq!(b.coef(&chi(1)), s(3));
    }

    #[test]
    fn identity_stencil() {
        let st = ContinuousStencil::new(1, [(vec![r(0, 1)], Scalar::one())]).unwrap();
        let psi: ContinuousSignal =
            BoxSignal::new(1, [(chi(0), Scalar::i()), (chi(5), s(3))], false).unwrap().into();
        assert_eq!(apply_continuous(&st, &psi).unwrap(), psi);
    }

    #[test]
    fn train_needs_integer_offsets() {
        let st = ContinuousStencil::new(1, [(vec![r(1, 2)], Scalar::one())]).unwrap();
        let v: ContinuousSignal = crate::lattice::LatticeSignal::delta(0.into(), s(1)).into();
        assert!(matches!(
            apply_continuous(&st, &v),
            Err(ContinuousError::NonLatticeOffset(_))
        ));
    }

    #[test]
    fn kernel_self_association() {
        let sym = ContinuousStencil::new(1, [(vec![r(1, 2)], s(1)), (vec![r(-1, 2)], s(1))]).unwrap();
        assert!(sym.kernel_is_self_conj_associated());
        let asym = ContinuousStencil::new(1, [(vec![r(0, 1)], s(1)), (vec![r(1, 2)], s(2))]).unwrap();
        assert!(!asym.kernel_is_self_conj_associated());
    }

    #[test]
    fn json_accepts_rational_offsets() {
        let text = r#"{"dim":1,"taps":[{"x":["1/2"],"re":1},{"x":[-0.5],"re":"2","im":"-1/3"}]}"#;
        let st: ContinuousStencil = serde_json::from_str(text).unwrap();
        assert_eq!(st.coef(&vec![r(-1, 2)]), Some(&Scalar::ratio(2, 1, -1, 3)));
        assert!(st.to_lattice().is_err());
    }
}
