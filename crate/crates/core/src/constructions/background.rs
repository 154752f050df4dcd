use std::collections::BTreeSet;

use num::rational::BigRational;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::claims::{s, Bundle, Check, Kind, Term};
use super::pairs::{check_mode, check_pauli_premises, close, emit_pair, max_tap, PairClaims};
use super::support::two_bumps;
use super::{require, BackgroundTriple, Condition, Construction, ConstructionError};
use crate::continuous::{rat_add, rat_neg, RatPoint};
use crate::geometry::{check_thm4_separation, distance, ConvexBody};
use crate::scalar::{rat_vec_serde, ratio_serde, ratio_to_f64, Scalar};
use crate::signal::{rat_f64, Mode, Operator, Signal};

fn norm_sqr(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |acc, c| acc + c * c)
}

fn rat_norm(v: &[BigRational]) -> f64 {
    rat_f64(v).iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Signals and claims common to every background triple: the sums
/// `h_j = w_j + w₀`, support containment, the domain geometry, nontriviality
/// and magnitude equality.
fn background_claims(b: &mut Bundle, t: &BackgroundTriple) -> Result<(), ConstructionError> {
    let h1 = t.w1.add(&t.w0)?;
    let h2 = t.w2.add(&t.w0)?;
    b.signal("w0", &t.w0);
    b.signal("w1", &t.w1);
    b.signal("w2", &t.w2);
    b.signal("h1", &h1);
    b.signal("h2", &h2);
    b.body("D0", &t.d0);
    b.body("D", &t.d);
    let one = Scalar::one();
    for (h, w) in [("h1", "w1"), ("h2", "w2")] {
        b.claim(
            &format!("{h}-is-{w}-plus-w0"),
            &format!("{h} = {w} + w₀"),
            true,
            Check::Combination {
                terms: vec![Term::new(w, one.clone()), Term::new("w0", one.clone())],
                equals: s(h),
            },
        );
    }
    b.claim("w0-in-d0", "supp w₀ ⊂ D₀", true, Check::SupportWithin { signal: s("w0"), body: s("D0") });
    b.claim("w1-in-d", "supp w₁ ⊂ D", true, Check::SupportWithin { signal: s("w1"), body: s("D") });
    b.claim("w2-in-d", "supp w₂ ⊂ D", true, Check::SupportWithin { signal: s("w2"), body: s("D") });
    b.claim(
        "geometry",
        "dist(D, D₀) = R with 0 < R < diam(D)",
        true,
        Check::Problem3Geometry { d0: s("D0"), d: s("D") },
    );
    b.claim("w0-nonzero", "w₀ ≠ 0", true, Check::Nonzero { signal: s("w0") });
    b.claim(
        "w1-differs-from-w2",
        "w₁ ≠ w₂",
        false,
        Check::SignalsEqual { lhs: s("w1"), rhs: s("w2") },
    );
    b.claim(
        "background-magnitudes-equal",
        "|(w₁ + w₀)^|² ≡ |(w₂ + w₀)^|²",
        true,
        Check::FourierMagnitudeEqual { lhs: s("h1"), rhs: s("h2"), grid: None },
    );
    Ok(())
}

/// Why the non-association claims were left out of a reference-offset
/// bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Downgrade {
    KernelSelfAssociated,
    PsiSelfAssociated,
}

/// Which sufficient conditions certify the kernel condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct KernelCertificate {
    /// Direct search found no conjugate-reflection witness for `σ`.
    direct: bool,
    /// `T = −T`, the reference phase relation, and some `a_{−y}` differs from
    /// `e^{iφ} conj(a_y)`.
    symmetric_phase_mismatch: bool,
    /// `T ≠ −T + z` for every `z`.
    no_symmetric_translate: bool,
}

fn no_symmetric_translate(offsets: &[RatPoint]) -> bool {
    let t: BTreeSet<&RatPoint> = offsets.iter().collect();
    for a in offsets {
        for b in offsets {
            let z = rat_add(a, b);
            let moved: BTreeSet<RatPoint> = offsets.iter().map(|y| rat_add(&rat_neg(y), &z)).collect();
            if moved.iter().collect::<BTreeSet<_>>() == t {
                return false;
            }
        }
    }
    true
}

/// Reference-offset construction shared by the general builder and the
/// three-tap example.
fn reference_core(
    kind: Kind,
    stencil: &Operator,
    psi: &Signal,
    base: &ConvexBody,
    y_star: &RatPoint,
    phase: Option<&Scalar>,
) -> Result<(Bundle, BackgroundTriple, super::ConstructionPair), ConstructionError> {
    check_mode(stencil, &[psi])?;
    require(y_star.len() == stencil.dim() && base.dim() == stencil.dim(), Condition::ModeConsistency, || {
        format!("y* and B must have dimension {}", stencil.dim())
    })?;
    require(!psi.is_zero(), Condition::PsiNonzero, || "ψ has empty support".into())?;
    require(psi.support_within(base)?, Condition::SupportInBase, || {
        "some support piece of ψ leaves B".into()
    })?;
    let rat = stencil.rational();
    let taps = rat.taps();
    let a_plus = taps.get(y_star);
    require(a_plus.is_some(), Condition::ReferenceOffsetInT, || format!("y* = {y_star:?}"))?;
    let minus = rat_neg(y_star);
    let a_minus = taps.get(&minus);
    require(a_minus.is_some(), Condition::ReferenceOffsetInMinusT, || {
        format!("−y* = {minus:?} is not an offset")
    })?;
    let (a_plus, a_minus) = (a_plus.expect("checked"), a_minus.expect("checked"));

    let offsets: Vec<RatPoint> = taps.keys().cloned().collect();
    let offsets_f: Vec<Vec<f64>> = offsets.iter().map(|y| rat_f64(y)).collect();
    let sep = check_thm4_separation(base, &offsets_f, &rat_f64(y_star))?;
    require(sep.separated, Condition::SeparatedReference, || {
        format!("dist(D0, D) = {}", sep.distance)
    })?;

    let scale = max_tap(stencil);
    let ratio = a_minus.checked_div(&a_plus.conj()).expect("taps are nonzero");
    let phase = match phase {
        Some(p) => {
            require(p.is_unit(), Condition::UnitPhase, || format!("|e^(iφ)| = {}", p.abs()))?;
            require(close(&ratio, p, scale), Condition::ConjugateReferenceTaps, || {
                format!("a_-y*/conj(a_y*) = {ratio}, e^(iφ) = {p}")
            })?;
            p.clone()
        }
        None => {
            require(ratio.is_unit(), Condition::ConjugateReferenceTaps, || {
                format!("|a_-y*| ≠ |a_y*| (ratio {ratio})")
            })?;
            ratio
        }
    };

    let psi_ok = !psi.is_self_conj_associated()?;
    let cert = KernelCertificate {
        direct: !stencil.kernel_self_conj_associated(),
        symmetric_phase_mismatch: stencil.is_symmetric()
            && taps.iter().any(|(y, a)| !close(&taps[&rat_neg(y)], &(&phase * &a.conj()), scale)),
        no_symmetric_translate: no_symmetric_translate(&offsets),
    };
    if !cert.direct && (cert.symmetric_phase_mismatch || cert.no_symmetric_translate) {
        return Err(ConstructionError::Inconsistent(
            "a sufficient condition certifies the kernel condition but σ has a witness".into(),
        ));
    }
    let downgrade = if !cert.direct {
        Some(Downgrade::KernelSelfAssociated)
    } else if !psi_ok {
        Some(Downgrade::PsiSelfAssociated)
    } else {
        None
    };

    let which = PairClaims {
        kernel: cert.direct,
        psi: psi_ok,
        not_associated: downgrade.is_none(),
    };
    let (mut b, pair) = emit_pair(kind, stencil, psi, which)?;
    b.param("kernel_certificate", &cert);
    b.param("downgrade", downgrade);
    b.param("phase", &phase);
    b.param("y_star", y_star.iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let w0 = psi.translate(y_star)?.scale(a_minus);
    let g_rot = pair.g.scale(&phase);
    let w1 = pair.f.sub(&w0)?;
    let w2 = g_rot.sub(&w0)?;
    let triple = BackgroundTriple {
        w0,
        w1,
        w2,
        d0: sep.d0.clone(),
        d: sep.d.clone(),
        phase: Some(phase.clone()),
    };
    b.signal("g_rot", &g_rot);
    b.body("B", base);
    b.claim("psi-in-base", "supp ψ ⊂ B", true, Check::SupportWithin { signal: s("psi"), body: s("B") });
    b.claim(
        "reference-separation",
        Condition::SeparatedReference.statement(),
        true,
        Check::ReferenceSeparation { base: s("B"), y_star: y_star.clone() },
    );
    b.claim(
        "g-rotated",
        "g_rot = e^{iφ} g",
        true,
        Check::Combination { terms: vec![Term::new("g", phase.clone())], equals: s("g_rot") },
    );
    b.claim(
        "w0-reference-term",
        "w₀(x) = a_{−y*} ψ(x − y*)",
        true,
        Check::Combination {
            terms: vec![Term::shifted("psi", a_minus.clone(), y_star.clone())],
            equals: s("w0"),
        },
    );
    let minus_one = Scalar::from_int(-1, 0);
    b.claim(
        "w1-is-f-minus-w0",
        "w₁ = f − w₀",
        true,
        Check::Combination {
            terms: vec![Term::new("f", Scalar::one()), Term::new("w0", minus_one.clone())],
            equals: s("w1"),
        },
    );
    b.claim(
        "w2-is-rotated-g-minus-w0",
        "w₂ = e^{iφ} g − w₀",
        true,
        Check::Combination {
            terms: vec![Term::new("g", phase.clone()), Term::new("w0", minus_one)],
            equals: s("w2"),
        },
    );
    background_claims(&mut b, &triple)?;
    b.claim(
        "f-masked-to-d0",
        "χ_{D₀} f = w₀",
        true,
        Check::MaskedEqual { signal: s("f"), body: s("D0"), equals: s("w0") },
    );
    b.claim(
        "rotated-g-masked-to-d0",
        "χ_{D₀} e^{iφ} g = w₀",
        true,
        Check::MaskedEqual { signal: s("g_rot"), body: s("D0"), equals: s("w0") },
    );
    let mut pieces = Vec::new();
    for (i, y) in offsets_f.iter().enumerate() {
        let name = format!("B_minus_t{i}");
        let minus_y: Vec<f64> = y.iter().map(|c| -c).collect();
        b.body(&name, &base.translate(&minus_y)?);
        pieces.push(name);
    }
    b.claim(
        "f-support-decomposition",
        "supp f ⊂ ⋃_{y ∈ T} (B − y)",
        true,
        Check::SupportWithinUnion { signal: s("f"), bodies: pieces },
    );
    if !stencil.is_symmetric() {
        b.claim(
            "no-symmetric-translate",
            "T ≠ −T + z for every z",
            true,
            Check::NoSymmetricTranslate { base: s("B"), y_star: y_star.clone() },
        );
    }
    if downgrade.is_none() {
        b.claim(
            "background-not-associated",
            "w₁ + w₀ and w₂ + w₀ are not related by a shift or a conjugate reflection",
            false,
            Check::Associated { lhs: s("h1"), rhs: s("h2"), kind: None },
        );
    }
    Ok((b, triple, pair))
}

/// Background triple from a stencil whose reference offset `y*` sits apart
/// from the other translates of `B`.
///
/// When either non-self-association condition fails the triple is still
/// built, without the non-association claims; the reason is recorded under
/// the `downgrade` parameter.
pub fn theorem4_background(
    stencil: &Operator,
    psi: &Signal,
    base: &ConvexBody,
    y_star: &RatPoint,
    phase: Option<&Scalar>,
) -> Result<Construction, ConstructionError> {
    let (bundle, triple, pair) = reference_core(Kind::Thm4, stencil, psi, base, y_star, phase)?;
    Ok(Construction {
        pair: Some(super::ConstructionPair { provenance: Kind::Thm4, ..pair }),
        triple: Some(triple),
        bundle,
    })
}

/// `ψ = b₁χ_r + b₂χ_r(· − z)` placed inside the ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestedPsi {
    pub b1: Scalar,
    pub b2: Scalar,
    #[serde(with = "rat_vec_serde")]
    pub z: RatPoint,
    #[serde(with = "ratio_serde")]
    pub r: BigRational,
}

/// Three-tap stencil `{0: a₁, y: a₂, −y: a₂e^{iφ}}` with `ψ` in `B_ρ(a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example2Params {
    pub a1: Scalar,
    pub a2: Scalar,
    /// `e^{iφ}`.
    pub phase: Scalar,
    #[serde(with = "rat_vec_serde")]
    pub y: RatPoint,
    #[serde(with = "ratio_serde")]
    pub rho: BigRational,
    #[serde(with = "rat_vec_serde")]
    pub center: RatPoint,
    pub psi: Signal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<NestedPsi>,
}

impl Example2Params {
    /// Builds `ψ` from two indicators and records them for the nesting check.
    #[allow(clippy::too_many_arguments)]
    pub fn with_nested_psi(
        mode: Mode,
        a1: Scalar,
        a2: Scalar,
        phase: Scalar,
        y: RatPoint,
        rho: BigRational,
        center: RatPoint,
        nested: NestedPsi,
    ) -> Result<Example2Params, ConstructionError> {
        let psi = two_bumps(mode, &nested.b1, &nested.b2, &nested.z, &nested.r)?;
        Ok(Example2Params { a1, a2, phase, y, rho, center, psi, nested: Some(nested) })
    }

    pub fn stencil(&self) -> Result<Operator, ConstructionError> {
        let d = self.y.len();
        Ok(Operator::from_taps(
            self.psi.mode(),
            d,
            vec![
                (vec![BigRational::zero(); d], self.a1.clone()),
                (self.y.clone(), self.a2.clone()),
                (rat_neg(&self.y), &self.a2 * &self.phase),
            ],
        )?)
    }

    pub fn ball(&self) -> Result<ConvexBody, ConstructionError> {
        Ok(ConvexBody::ball(rat_f64(&self.center), ratio_to_f64(&self.rho))?)
    }
}

pub fn example2(p: &Example2Params) -> Result<Construction, ConstructionError> {
    let d = p.psi.dim();
    require(p.y.len() == d && p.center.len() == d, Condition::ModeConsistency, || {
        format!("ψ has dimension {d}, y has {}, a has {}", p.y.len(), p.center.len())
    })?;
    require(!p.a1.is_zero() && p.a2.is_real() && !p.a2.is_zero(), Condition::RealOuterTap, || {
        format!("a1 = {}, a2 = {}", p.a1, p.a2)
    })?;
    require(p.phase.is_unit(), Condition::UnitPhase, || format!("|e^(iφ)| = {}", p.phase.abs()))?;
    let scale = p.a1.abs().max(p.a2.abs());
    require(
        !close(&p.a1, &(&p.a1.conj() * &p.phase), scale),
        Condition::PhaseBreaksCentralSymmetry,
        || format!("a1 = conj(a1) e^(iφ) for a1 = {}", p.a1),
    )?;
    let four_rho2 = BigRational::from_integer(4.into()) * &p.rho * &p.rho;
    require(
        p.rho.is_positive() && four_rho2 < norm_sqr(&p.y),
        Condition::RadiusBelowHalfShift,
        || format!("ρ = {}, |y| = {}", p.rho, rat_norm(&p.y)),
    )?;
    if let Some(n) = &p.nested {
        let two_a: RatPoint = p.center.iter().map(|c| c * BigRational::from_integer(2.into())).collect();
        let z2 = norm_sqr(&n.z);
        let slack = &p.rho - &n.r;
        let ok = n.z == two_a
            && z2 < four_rho2
            && !slack.is_negative()
            && z2 <= BigRational::from_integer(4.into()) * &slack * &slack;
        require(ok, Condition::NestedPsiGeometry, || {
            format!("z = {:?}, a = {:?}, ρ = {}, r = {}", rat_f64(&n.z), rat_f64(&p.center), p.rho, n.r)
        })?;
    }
    let ball = p.ball()?;
    require(p.psi.support_within(&ball)?, Condition::SupportInBall, || {
        "some support piece of ψ leaves B_ρ(a)".into()
    })?;
    let stencil = p.stencil()?;
    require(
        !p.psi.is_self_conj_associated()?,
        Condition::PsiNotSelfAssociated,
        || "ψ(x) = e^{iα} conj(ψ(−x + y)) has a witness".into(),
    )?;
    match check_pauli_premises(&stencil, &p.psi) {
        Err(ConstructionError::Precondition { condition, detail }) => {
            return Err(ConstructionError::Inconsistent(format!(
                "three-tap premises hold but `{}` fails: {detail}",
                condition.name()
            )))
        }
        r => r?,
    }

    let (mut b, triple, pair) =
        reference_core(Kind::Example2, &stencil, &p.psi, &ball, &p.y, Some(&p.phase))?;
    if b.parameters.get("downgrade").is_some_and(|v| !v.is_null()) {
        return Err(ConstructionError::Inconsistent(
            "three-tap premises hold but a non-self-association condition fails".into(),
        ));
    }
    b.param("example2", p);
    b.claim(
        "pointwise-modulus-equal",
        "|f| = |g| on X",
        true,
        Check::PointwiseModulusEqual { lhs: s("f"), rhs: s("g") },
    );

    let neg_y = rat_neg(&p.y);
    let rot_a2 = &p.a2 * &p.phase;
    let f_closed = p
        .psi
        .scale(&p.a1)
        .add(&p.psi.translate(&neg_y)?.scale(&p.a2))?
        .add(&p.psi.translate(&p.y)?.scale(&rot_a2))?;
    let g_rot_closed = p
        .psi
        .scale(&(&p.a1.conj() * &p.phase))
        .add(&p.psi.translate(&neg_y)?.scale(&p.a2))?
        .add(&p.psi.translate(&p.y)?.scale(&rot_a2))?;
    b.signal("f_closed", &f_closed);
    b.signal("g_rot_closed", &g_rot_closed);
    b.claim(
        "f-closed-form",
        "f = a₁ψ(x) + a₂ψ(x + y) + a₂e^{iφ}ψ(x − y)",
        true,
        Check::SignalsEqual { lhs: s("f"), rhs: s("f_closed") },
    );
    b.claim(
        "rotated-g-closed-form",
        "g e^{iφ} = ā₁e^{iφ}ψ(x) + a₂ψ(x + y) + a₂e^{iφ}ψ(x − y)",
        true,
        Check::SignalsEqual { lhs: s("g_rot"), rhs: s("g_rot_closed") },
    );

    // The domains in closed form: D₀ = B_ρ(a + y), D = ch(B_ρ(a) ∪ B_ρ(a − y)).
    let rho = ratio_to_f64(&p.rho);
    let d0 = ConvexBody::ball(rat_f64(&rat_add(&p.center, &p.y)), rho)?;
    let d = ConvexBody::new(d, vec![rat_f64(&p.center), rat_f64(&rat_add(&p.center, &neg_y))], rho)?;
    let expected_r = rat_norm(&p.y) - 2.0 * rho;
    let same_domains = distance(&d0, &triple.d0)? == 0.0
        && super::same_body(&d0, &triple.d0)
        && super::same_body(&d, &triple.d);
    if !same_domains {
        return Err(ConstructionError::Inconsistent(
            "closed-form domains differ from the reference-offset domains".into(),
        ));
    }
    b.param("R_closed_form", expected_r);
    b.claim(
        "distance-closed-form",
        "R = |y| − 2ρ",
        true,
        Check::DistanceEquals { a: s("D0"), b: s("D"), value: expected_r },
    );

    Ok(Construction {
        pair: Some(super::ConstructionPair { provenance: Kind::Example2, ..pair }),
        triple: Some(triple),
        bundle: b,
    })
}

/// Background triple whose two solutions are conjugate reflections of each
/// other: `w₀ = ψ`, `w₁ = ψ̃ + φ`, `w₂ = ψ̃ + φ̃`.
pub fn theorem3_background(
    psi: &Signal,
    phi: &Signal,
    u0: &ConvexBody,
    u1: &ConvexBody,
) -> Result<Construction, ConstructionError> {
    let dim = psi.dim();
    require(
        psi.mode() == phi.mode() && phi.dim() == dim && u0.dim() == dim && u1.dim() == dim,
        Condition::ModeConsistency,
        || "ψ, φ, U₀ and U₁ must share setting and dimension".into(),
    )?;
    require(!psi.is_zero(), Condition::PsiNonzero, || "ψ has empty support".into())?;
    require(!phi.is_zero(), Condition::PhiNonzero, || "φ has empty support".into())?;
    require(psi.support_within(u0)?, Condition::SupportInU0, || "supp ψ leaves U₀".into())?;
    require(phi.support_within(u1)?, Condition::SupportInU1, || "supp φ leaves U₁".into())?;
    require(u1.is_symmetric(), Condition::SymmetricU1, || "U₁ ≠ −U₁".into())?;
    let sep = distance(u1, u0)?;
    require(sep > crate::tolerance::GEOMETRY, Condition::PositiveSeparation, || {
        format!("dist(U₁, U₀) = {sep}")
    })?;
    let psi_t = psi.conj_reflect();
    let phi_t = phi.conj_reflect();
    require(!phi.same_as(&phi_t), Condition::PhiNotConjSymmetric, || "φ = φ̃".into())?;

    let triple = BackgroundTriple {
        w0: psi.clone(),
        w1: psi_t.add(phi)?,
        w2: psi_t.add(&phi_t)?,
        d0: u0.clone(),
        d: u1.hull_of_union(&u0.negated())?,
        phase: None,
    };
    let mut b = Bundle::new(Kind::Thm3, psi.mode(), dim);
    b.signal("psi", psi);
    b.signal("phi", phi);
    b.signal("psi_tilde", &psi_t);
    b.signal("phi_tilde", &phi_t);
    b.body("U0", u0);
    b.body("U1", u1);
    b.param("separation", sep);
    b.claim("psi-in-u0", "supp ψ ⊂ U₀", true, Check::SupportWithin { signal: s("psi"), body: s("U0") });
    b.claim("phi-in-u1", "supp φ ⊂ U₁", true, Check::SupportWithin { signal: s("phi"), body: s("U1") });
    b.claim("u1-symmetric", "U₁ = −U₁", true, Check::BodySymmetric { body: s("U1") });
    b.claim(
        "psi-tilde",
        "ψ̃(x) = conj(ψ(−x))",
        true,
        Check::ConjReflection { signal: s("psi"), equals: s("psi_tilde") },
    );
    b.claim(
        "phi-tilde",
        "φ̃(x) = conj(φ(−x))",
        true,
        Check::ConjReflection { signal: s("phi"), equals: s("phi_tilde") },
    );
    b.claim(
        "phi-not-conj-symmetric",
        Condition::PhiNotConjSymmetric.statement(),
        false,
        Check::SignalsEqual { lhs: s("phi"), rhs: s("phi_tilde") },
    );
    let one = Scalar::one();
    b.claim(
        "w0-is-psi",
        "w₀ = ψ",
        true,
        Check::SignalsEqual { lhs: s("w0"), rhs: s("psi") },
    );
    for (w, second) in [("w1", "phi"), ("w2", "phi_tilde")] {
        b.claim(
            &format!("{w}-composition"),
            &format!("{w} = ψ̃ + {}", if second == "phi" { "φ" } else { "φ̃" }),
            true,
            Check::Combination {
                terms: vec![Term::new("psi_tilde", one.clone()), Term::new(second, one.clone())],
                equals: s(w),
            },
        );
    }
    background_claims(&mut b, &triple)?;
    b.claim(
        "background-associated",
        "w₂ + w₀ = conj((w₁ + w₀)(−x))",
        true,
        Check::Associated {
            lhs: s("h1"),
            rhs: s("h2"),
            kind: Some(crate::lattice::AssociationKind::ConjReflect),
        },
    );
    Ok(Construction { pair: None, triple: Some(triple), bundle: b })
}
