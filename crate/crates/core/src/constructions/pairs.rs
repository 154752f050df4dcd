use num::rational::BigRational;
use num::Zero;
use serde::{Deserialize, Serialize};

use super::claims::{s, Bundle, Check, Kind};
use super::support::{chi, two_bumps};
use super::{require, Condition, Construction, ConstructionError, ConstructionPair};
use crate::continuous::{rat_add, rat_neg, RatPoint};
use crate::lattice::AssociationKind;
use crate::scalar::{rat_vec_serde, ratio_serde, Scalar};
use crate::signal::{Mode, Operator, Signal};
use crate::tolerance;

pub(crate) fn check_mode(stencil: &Operator, signals: &[&Signal]) -> Result<(), ConstructionError> {
    for w in signals {
        require(
            w.mode() == stencil.mode() && w.dim() == stencil.dim(),
            Condition::ModeConsistency,
            || {
                format!(
                    "stencil is {:?} in dimension {}, signal is {:?} in dimension {}",
                    stencil.mode(),
                    stencil.dim(),
                    w.mode(),
                    w.dim()
                )
            },
        )?;
    }
    Ok(())
}

/// Scalar equality: exact on exact data, relative to `scale` otherwise.
pub(crate) fn close(a: &Scalar, b: &Scalar, scale: f64) -> bool {
    a.same_as(b, tolerance::ASSOCIATION_REL * scale.max(1.0))
}

pub(crate) fn max_tap(stencil: &Operator) -> f64 {
    stencil
        .rational()
        .taps()
        .values()
        .map(Scalar::abs)
        .fold(0.0, f64::max)
}

/// Which of the optional pair claims to emit.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairClaims {
    pub kernel: bool,
    pub psi: bool,
    pub not_associated: bool,
}

impl PairClaims {
    pub(crate) const ALL: PairClaims = PairClaims { kernel: true, psi: true, not_associated: true };
}

/// `f = Lψ`, `g = L*ψ` and the claims shared by every pair construction.
pub(crate) fn emit_pair(
    kind: Kind,
    stencil: &Operator,
    psi: &Signal,
    which: PairClaims,
) -> Result<(Bundle, ConstructionPair), ConstructionError> {
    let f = stencil.apply(psi)?;
    let g = stencil.apply_adjoint(psi)?;

    let mut b = Bundle::new(kind, stencil.mode(), stencil.dim());
    b.stencil = Some(stencil.clone());
    b.signal("psi", psi);
    b.signal("f", &f);
    b.signal("g", &g);
    b.claim(
        "f-from-stencil",
        "f = Lψ",
        true,
        Check::ReproducesStencil { output: s("f"), input: s("psi"), adjoint: false },
    );
    b.claim(
        "g-from-adjoint",
        "g = L*ψ",
        true,
        Check::ReproducesStencil { output: s("g"), input: s("psi"), adjoint: true },
    );
    if which.kernel {
        b.claim(
            "kernel-not-self-associated",
            Condition::KernelNotSelfAssociated.statement(),
            false,
            Check::SelfConjAssociated { signal: None },
        );
    }
    if which.psi {
        b.claim(
            "psi-not-self-associated",
            Condition::PsiNotSelfAssociated.statement(),
            false,
            Check::SelfConjAssociated { signal: Some(s("psi")) },
        );
    }
    b.claim("f-finite-support", "supp f is compact", true, Check::FiniteSupport { signal: s("f") });
    b.claim("g-finite-support", "supp g is compact", true, Check::FiniteSupport { signal: s("g") });
    b.claim("f-nonzero", "f ≠ 0", true, Check::Nonzero { signal: s("f") });
    b.claim(
        "magnitudes-equal",
        "|f̂|² ≡ |ĝ|² ≢ 0",
        true,
        Check::FourierMagnitudeEqual { lhs: s("f"), rhs: s("g"), grid: None },
    );
    if which.not_associated {
        b.claim(
            "not-associated",
            "f and g are not related by a shift or a conjugate reflection with a phase",
            false,
            Check::Associated { lhs: s("f"), rhs: s("g"), kind: None },
        );
    }
    let pair = ConstructionPair {
        provenance: kind,
        stencil: stencil.clone(),
        psi: psi.clone(),
        f,
        g,
    };
    Ok((b, pair))
}

/// Checks the two non-self-association conditions, then emits the pair.
fn pair_core(
    kind: Kind,
    stencil: &Operator,
    psi: &Signal,
) -> Result<(Bundle, ConstructionPair), ConstructionError> {
    check_mode(stencil, &[psi])?;
    require(!psi.is_zero(), Condition::PsiNonzero, || "ψ has empty support".into())?;
    require(
        !stencil.kernel_self_conj_associated(),
        Condition::KernelNotSelfAssociated,
        || "σ(x) = conj(σ(−x + y)) e^{iα} has a witness".into(),
    )?;
    require(
        !psi.is_self_conj_associated()?,
        Condition::PsiNotSelfAssociated,
        || "ψ(x) = e^{iα} conj(ψ(−x + y)) has a witness".into(),
    )?;
    emit_pair(kind, stencil, psi, PairClaims::ALL)
}

/// Non-association pair from a stencil and a source signal.
pub fn theorem1_pair(stencil: &Operator, psi: &Signal) -> Result<Construction, ConstructionError> {
    let (bundle, pair) = pair_core(Kind::Thm1, stencil, psi)?;
    Ok(Construction { pair: Some(pair), triple: None, bundle })
}

pub(crate) fn check_pauli_premises(stencil: &Operator, psi: &Signal) -> Result<(), ConstructionError> {
    check_mode(stencil, &[psi])?;
    require(!psi.is_zero(), Condition::PsiNonzero, || "ψ has empty support".into())?;
    require(stencil.is_symmetric(), Condition::SymmetricOffsets, || {
        "some offset y ∈ T has −y ∉ T".into()
    })?;
    let rat = stencil.rational();
    let taps = rat.taps();
    let scale = max_tap(stencil);
    for (y, a) in taps {
        let b = &taps[&rat_neg(y)];
        require(close(&a.norm_sqr(), &b.norm_sqr(), scale * scale), Condition::ModulusSymmetry, || {
            format!("|a_y| = {} but |a_-y| = {} at y = {y:?}", a.abs(), b.abs())
        })?;
    }
    let (y0, a0) = taps.iter().next().expect("stencil has taps");
    let c = a0
        .checked_div(&taps[&rat_neg(y0)].conj())
        .expect("taps are nonzero");
    let common = taps
        .iter()
        .all(|(y, a)| close(a, &(&c * &taps[&rat_neg(y)].conj()), scale));
    require(!common, Condition::NoCommonConjugatePhase, || {
        format!("a_y = e^(iα) conj(a_-y) for every y with α = {}", c.arg())
    })?;
    let offsets: Vec<RatPoint> = taps.keys().cloned().collect();
    require(psi.translates_disjoint(&offsets)?, Condition::DisjointTranslates, || {
        "two translates supp ψ − y overlap".into()
    })?;
    Ok(())
}

/// Pair with pointwise equal moduli from a symmetric stencil.
///
/// The symmetric-stencil premises imply the kernel condition; both are
/// checked and a disagreement is reported as an internal inconsistency.
pub fn theorem2_pauli_pair(
    stencil: &Operator,
    psi: &Signal,
) -> Result<Construction, ConstructionError> {
    check_pauli_premises(stencil, psi)?;
    let (mut bundle, mut pair) = match pair_core(Kind::Thm2, stencil, psi) {
        Err(ConstructionError::Precondition { condition: Condition::KernelNotSelfAssociated, .. }) => {
            return Err(ConstructionError::Inconsistent(
                "symmetric-stencil premises hold but σ is self-associated".into(),
            ))
        }
        r => r?,
    };
    pair.provenance = Kind::Thm2;
    pointwise_claim(&mut bundle);
    Ok(Construction { pair: Some(pair), triple: None, bundle })
}

fn pointwise_claim(bundle: &mut Bundle) {
    bundle.claim(
        "pointwise-modulus-equal",
        "|f| = |g| on X",
        true,
        Check::PointwiseModulusEqual { lhs: s("f"), rhs: s("g") },
    );
}

/// The claim list of a theorem pair emitted without checking any premise.
/// Negative controls use it to see which conclusions survive a broken
/// premise.
pub(crate) fn unchecked_pair_bundle(
    kind: Kind,
    stencil: &Operator,
    psi: &Signal,
) -> Result<Bundle, ConstructionError> {
    check_mode(stencil, &[psi])?;
    let (mut bundle, _) = emit_pair(kind, stencil, psi, PairClaims::ALL)?;
    if kind == Kind::Thm2 {
        pointwise_claim(&mut bundle);
    }
    Ok(bundle)
}

/// Two-tap stencil `{0: a₁, y: a₂}` acting on `ψ = b₁χ_r + b₂χ_r(· − z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example1Params {
    pub a1: Scalar,
    pub a2: Scalar,
    pub b1: Scalar,
    pub b2: Scalar,
    #[serde(with = "rat_vec_serde")]
    pub y: RatPoint,
    #[serde(with = "rat_vec_serde")]
    pub z: RatPoint,
    #[serde(with = "ratio_serde")]
    pub r: BigRational,
    pub mode: Mode,
}

impl Example1Params {
    /// Default indicator radius: a single lattice point, or a quarter-width
    /// interval on the line.
    pub fn default_radius(mode: Mode) -> BigRational {
        match mode {
            Mode::Discrete => BigRational::new(1.into(), 2.into()),
            Mode::Continuous => BigRational::new(1.into(), 4.into()),
        }
    }
}

fn is_origin(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn example1(p: &Example1Params) -> Result<Construction, ConstructionError> {
    let d = p.y.len();
    require(d >= 1 && p.z.len() == d, Condition::ModeConsistency, || {
        format!("y has dimension {d}, z has dimension {}", p.z.len())
    })?;
    require(
        [&p.a1, &p.a2, &p.b1, &p.b2].iter().all(|c| !c.is_zero()),
        Condition::NonzeroCoefficients,
        || "a coefficient is zero".into(),
    )?;
    require(!is_origin(&p.y) && !is_origin(&p.z), Condition::NonzeroOffsets, || {
        "y = 0 or z = 0".into()
    })?;
    let scale = [&p.a1, &p.a2, &p.b1, &p.b2].iter().map(|c| c.abs()).fold(0.0, f64::max);
    require(
        !close(&p.a1.norm_sqr(), &p.a2.norm_sqr(), scale * scale),
        Condition::DistinctTapModuli,
        || format!("|a1| = |a2| = {}", p.a1.abs()),
    )?;
    require(
        !close(&p.b1.norm_sqr(), &p.b2.norm_sqr(), scale * scale),
        Condition::DistinctPsiModuli,
        || format!("|b1| = |b2| = {}", p.b1.abs()),
    )?;

    let origin = vec![BigRational::zero(); d];
    let stencil = Operator::from_taps(
        p.mode,
        d,
        vec![(origin.clone(), p.a1.clone()), (p.y.clone(), p.a2.clone())],
    )?;
    let psi = two_bumps(p.mode, &p.b1, &p.b2, &p.z, &p.r)?;
    let (mut b, pair) = match pair_core(Kind::Example1, &stencil, &psi) {
        Err(ConstructionError::Precondition { condition, detail })
            if matches!(
                condition,
                Condition::KernelNotSelfAssociated | Condition::PsiNotSelfAssociated
            ) =>
        {
            return Err(ConstructionError::Inconsistent(format!(
                "premises hold but `{}` fails: {detail}",
                condition.name()
            )))
        }
        r => r?,
    };
    b.param("example1", p);

    let mode = p.mode;
    let bump = |center: &RatPoint, coef: Scalar| chi(mode, center, &p.r, &coef);
    let sum = |parts: Vec<Signal>| -> Result<Signal, ConstructionError> {
        let mut it = parts.into_iter();
        let first = it.next().expect("nonempty");
        it.try_fold(first, |acc, w| Ok(acc.add(&w)?))
    };
    let (a1, a2, b1, b2) = (&p.a1, &p.a2, &p.b1, &p.b2);
    let (y, z) = (&p.y, &p.z);
    let neg_y = rat_neg(y);
    let z_minus_y = rat_add(z, &neg_y);

    let f_closed = sum(vec![
        bump(&origin, a1 * b1)?,
        bump(z, a1 * b2)?,
        bump(&neg_y, a2 * b1)?,
        bump(&z_minus_y, a2 * b2)?,
    ])?;
    let g_closed = sum(vec![
        bump(&origin, &a1.conj() * b1)?,
        bump(z, &a1.conj() * b2)?,
        bump(y, &a2.conj() * b1)?,
        bump(&rat_add(z, y), &a2.conj() * b2)?,
    ])?;
    let g_y = pair.g.translate(&neg_y)?;
    let g_y_closed = sum(vec![
        bump(&origin, &a2.conj() * b1)?,
        bump(z, &a2.conj() * b2)?,
        bump(&neg_y, &a1.conj() * b1)?,
        bump(&z_minus_y, &a1.conj() * b2)?,
    ])?;
    b.signal("f_closed", &f_closed);
    b.signal("g_closed", &g_closed);
    b.signal("g_y", &g_y);
    b.signal("g_y_closed", &g_y_closed);
    b.claim(
        "f-closed-form",
        "f = a₁b₁χ_r(x) + a₁b₂χ_r(x − z) + a₂b₁χ_r(x + y) + a₂b₂χ_r(x − z + y)",
        true,
        Check::SignalsEqual { lhs: s("f"), rhs: s("f_closed") },
    );
    b.claim(
        "g-closed-form",
        "g = ā₁b₁χ_r(x) + ā₁b₂χ_r(x − z) + ā₂b₁χ_r(x − y) + ā₂b₂χ_r(x − z − y)",
        true,
        Check::SignalsEqual { lhs: s("g"), rhs: s("g_closed") },
    );
    b.claim(
        "g-y-is-shifted-g",
        "g_y(x) = g(x + y)",
        true,
        Check::Combination {
            terms: vec![super::Term::shifted("g", Scalar::one(), neg_y.clone())],
            equals: s("g_y"),
        },
    );
    b.claim(
        "g-y-closed-form",
        "g_y = ā₂b₁χ_r(x) + ā₂b₂χ_r(x − z) + ā₁b₁χ_r(x + y) + ā₁b₂χ_r(x − z + y)",
        true,
        Check::SignalsEqual { lhs: s("g_y"), rhs: s("g_y_closed") },
    );
    b.claim(
        "g-y-shift-associated",
        "g_y is a translate of g",
        true,
        Check::Associated { lhs: s("g_y"), rhs: s("g"), kind: Some(AssociationKind::Shift) },
    );

    if y == z {
        let neg_z = rat_neg(z);
        let f_merged = sum(vec![
            bump(&origin, &(a1 * b1) + &(a2 * b2))?,
            bump(z, a1 * b2)?,
            bump(&neg_z, a2 * b1)?,
        ])?;
        let g_y_merged = sum(vec![
            bump(&origin, &(&a1.conj() * b2) + &(&a2.conj() * b1))?,
            bump(z, &a2.conj() * b2)?,
            bump(&neg_z, &a1.conj() * b1)?,
        ])?;
        b.signal("f_merged", &f_merged);
        b.signal("g_y_merged", &g_y_merged);
        b.claim(
            "f-merged-form",
            "for z = y: f = (a₁b₁ + a₂b₂)χ_r(x) + a₁b₂χ_r(x − z) + a₂b₁χ_r(x + z)",
            true,
            Check::SignalsEqual { lhs: s("f"), rhs: s("f_merged") },
        );
        b.claim(
            "g-y-merged-form",
            "for z = y: g_y = (ā₁b₂ + ā₂b₁)χ_r(x) + ā₂b₂χ_r(x − z) + ā₁b₁χ_r(x + z)",
            true,
            Check::SignalsEqual { lhs: s("g_y"), rhs: s("g_y_merged") },
        );
        let tol = tolerance::ASSOCIATION_REL * scale.max(1.0);
        if b1.same_as(a2, tol) && b2.same_as(&-a1, tol) {
            let f_special = sum(vec![bump(&neg_z, a2 * a2)?, bump(z, -(a1 * a1))?])?;
            let g_y_special = sum(vec![
                bump(&neg_z, &a1.conj() * a2)?,
                bump(&origin, &a2.norm_sqr() - &a1.norm_sqr())?,
                bump(z, -(a1 * &a2.conj()))?,
            ])?;
            b.signal("f_special", &f_special);
            b.signal("g_y_special", &g_y_special);
            b.claim(
                "f-special-form",
                "for z = y, b₁ = a₂, b₂ = −a₁: f = a₂²χ_r(x + z) − a₁²χ_r(x − z)",
                true,
                Check::SignalsEqual { lhs: s("f"), rhs: s("f_special") },
            );
            b.claim(
                "g-y-special-form",
                "for z = y, b₁ = a₂, b₂ = −a₁: g_y = ā₁a₂χ_r(x + z) + (|a₂|² − |a₁|²)χ_r(x) − a₁ā₂χ_r(x − z)",
                true,
                Check::SignalsEqual { lhs: s("g_y"), rhs: s("g_y_special") },
            );
        }
    }

    let mut pair = pair;
    pair.provenance = Kind::Example1;
    Ok(Construction { pair: Some(pair), triple: None, bundle: b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{autocorrelation, LatticePoint, LatticeSignal, Stencil};

    fn int(v: i64) -> Scalar {
        Scalar::from_int(v, 0)
    }

    fn r(v: i64) -> RatPoint {
        vec![BigRational::from_integer(v.into())]
    }

    fn stencil(taps: &[(i64, Scalar)]) -> Operator {
        Operator::Discrete(
            Stencil::new(1, taps.iter().map(|(y, a)| (LatticePoint::from(*y), a.clone()))).unwrap(),
        )
    }

    fn psi13() -> Signal {
        LatticeSignal::from_values_1d(0, &[int(1), int(3)]).into()
    }

    fn params(mode: Mode) -> Example1Params {
        Example1Params {
            a1: int(1),
            a2: int(2),
            b1: int(1),
            b2: int(3),
            y: r(1),
            z: r(2),
            r: Example1Params::default_radius(mode),
            mode,
        }
    }

    #[test]
    fn example1_discrete_values_and_autocorrelation() {
        let c = example1(&params(Mode::Discrete)).unwrap();
        let pair = c.pair.unwrap();
        let f = pair.f.as_discrete().unwrap();
        let g = pair.g.as_discrete().unwrap();
        let vals = |v: &LatticeSignal| {
            v.iter().map(|(x, c)| (x.coords()[0], c.clone())).collect::<Vec<_>>()
        };
        assert_eq!(vals(f), vec![(-1, int(2)), (0, int(1)), (1, int(6)), (2, int(3))]);
        assert_eq!(vals(g), vec![(0, int(1)), (1, int(2)), (2, int(3)), (3, int(6))]);
        // Brute-force lag sums r(k) = Σ f(x+k) conj f(x).
        let coeffs = [2i64, 1, 6, 3];
        let brute: Vec<i64> = (0..4)
            .map(|k| (0..4 - k).map(|x| coeffs[x + k] * coeffs[x]).sum())
            .collect();
        assert_eq!(brute, vec![50, 26, 15, 6]);
        let table = autocorrelation(f);
        for (k, v) in brute.iter().enumerate() {
            assert_eq!(table.lag(&LatticePoint::from(k as i64)), int(*v));
        }
        assert!(c.bundle.find_claim("f-merged-form").is_none());
    }

    #[test]
    fn example1_special_case_has_two_atoms() {
        let mut p = params(Mode::Discrete);
        p.a1 = int(1);
        p.a2 = Scalar::from_int(0, 2);
        p.b1 = p.a2.clone();
        p.b2 = -&p.a1;
        p.z = p.y.clone();
        let c = example1(&p).unwrap();
        let f = c.pair.unwrap().f;
        assert_eq!(f.len(), 2);
        let f = f.as_discrete().unwrap();
        assert_eq!(f.get(&LatticePoint::from(-1)), int(-4));
        assert_eq!(f.get(&LatticePoint::from(1)), int(-1));
        assert!(c.bundle.find_claim("g-y-special-form").is_some());
    }

    #[test]
    fn example1_rejections() {
        let mut p = params(Mode::Discrete);
        p.a2 = Scalar::from_int(0, 1);
        assert_eq!(example1(&p).unwrap_err().condition(), Some(Condition::DistinctTapModuli));
        let mut p = params(Mode::Discrete);
        p.b2 = int(-1);
        assert_eq!(example1(&p).unwrap_err().condition(), Some(Condition::DistinctPsiModuli));
        let mut p = params(Mode::Discrete);
        p.z = r(0);
        assert_eq!(example1(&p).unwrap_err().condition(), Some(Condition::NonzeroOffsets));
        let mut p = params(Mode::Discrete);
        p.y = vec![BigRational::new(1.into(), 2.into())];
        assert!(example1(&p).is_err());
    }

    #[test]
    fn example1_continuous_builds() {
        let c = example1(&params(Mode::Continuous)).unwrap();
        assert_eq!(c.pair.unwrap().f.len(), 4);
    }

    #[test]
    fn theorem1_rejections() {
        let e = theorem1_pair(&stencil(&[(0, int(1))]), &psi13()).unwrap_err();
        assert_eq!(e.condition(), Some(Condition::KernelNotSelfAssociated));
        let delta: Signal = LatticeSignal::from_values_1d(0, &[int(1)]).into();
        let e = theorem1_pair(&stencil(&[(0, int(1)), (1, int(2))]), &delta).unwrap_err();
        assert_eq!(e.condition(), Some(Condition::PsiNotSelfAssociated));
    }

    #[test]
    fn pauli_pair_differs_only_in_center() {
        let st = stencil(&[(0, Scalar::i()), (2, int(1)), (-2, int(1))]);
        let c = theorem2_pauli_pair(&st, &psi13()).unwrap();
        let pair = c.pair.unwrap();
        let diff = pair.f.sub(&pair.g).unwrap();
        let diff = diff.as_discrete().unwrap();
        // ψ = δ₀ + 3δ₁ under the center taps i and −i.
        assert_eq!(diff.get(&LatticePoint::from(0)), Scalar::from_int(0, 2));
        assert_eq!(diff.get(&LatticePoint::from(1)), Scalar::from_int(0, 6));
        assert_eq!(diff.len(), 2);
        assert!(pair.f.pointwise_modulus_equal(&pair.g).unwrap());
    }

    #[test]
    fn pauli_rejections() {
        let real = stencil(&[(0, int(1)), (2, int(1)), (-2, int(1))]);
        assert_eq!(
            theorem2_pauli_pair(&real, &psi13()).unwrap_err().condition(),
            Some(Condition::NoCommonConjugatePhase)
        );
        let close = stencil(&[(0, Scalar::i()), (1, int(1)), (-1, int(1))]);
        assert_eq!(
            theorem2_pauli_pair(&close, &psi13()).unwrap_err().condition(),
            Some(Condition::DisjointTranslates)
        );
        let lopsided = stencil(&[(0, Scalar::i()), (2, int(1)), (-2, int(2))]);
        assert_eq!(
            theorem2_pauli_pair(&lopsided, &psi13()).unwrap_err().condition(),
            Some(Condition::ModulusSymmetry)
        );
        let one_sided = stencil(&[(0, Scalar::i()), (2, int(1))]);
        assert_eq!(
            theorem2_pauli_pair(&one_sided, &psi13()).unwrap_err().condition(),
            Some(Condition::SymmetricOffsets)
        );
    }
}
