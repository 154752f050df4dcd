use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::VerifyError;
use crate::constructions::{Bundle, Check, Claim, Kind};
use crate::continuous::RatPoint;
use crate::geometry::{check_problem3_geometry, check_remark5, check_thm4_separation, distance, ConvexBody};
use crate::signal::{rat_f64, Mode, Operator, Signal};
use crate::tolerance;

/// Grid points per axis used for sampled magnitude comparisons.
pub fn default_grid(dim: usize) -> usize {
    match dim {
        1 => 4096,
        2 => 64,
        _ => 16,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub name: String,
    pub statement: String,
    pub verifier: String,
    pub expected: bool,
    pub observed: bool,
    pub pass: bool,
    pub certificate: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub kind: Kind,
    pub mode: Mode,
    pub pass: bool,
    pub claims: Vec<ClaimResult>,
    /// Wall-clock milliseconds; only filled on request so reports stay
    /// reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| !c.pass)
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.name == name)
    }
}

struct Ctx<'a> {
    bundle: &'a Bundle,
}

impl<'a> Ctx<'a> {
    fn signal(&self, name: &str) -> Result<&'a Signal, VerifyError> {
        self.bundle
            .signals
            .get(name)
            .ok_or_else(|| VerifyError::UnknownSignal(name.to_string()))
    }

    fn body(&self, name: &str) -> Result<&'a ConvexBody, VerifyError> {
        self.bundle
            .bodies
            .get(name)
            .ok_or_else(|| VerifyError::UnknownBody(name.to_string()))
    }

    fn stencil(&self) -> Result<&'a Operator, VerifyError> {
        self.bundle.stencil.as_ref().ok_or(VerifyError::MissingStencil)
    }

    fn offsets_f64(&self) -> Result<Vec<Vec<f64>>, VerifyError> {
        Ok(self.stencil()?.offsets().iter().map(|y| rat_f64(y)).collect())
    }
}

fn shift_text(y: &RatPoint) -> Vec<String> {
    y.iter().map(ToString::to_string).collect()
}

fn pieces_summary(w: &Signal) -> Value {
    json!({ "pieces": w.len(), "exact": w.is_exact() })
}

fn evaluate(ctx: &Ctx, check: &Check) -> Result<(bool, Value), VerifyError> {
    Ok(match check {
        Check::ReproducesStencil { output, input, adjoint } => {
            let st = ctx.stencil()?;
            let psi = ctx.signal(input)?;
            let recomputed = if *adjoint { st.apply_adjoint(psi)? } else { st.apply(psi)? };
            let stored = ctx.signal(output)?;
            let same = recomputed.same_as(stored);
            (same, json!({ "recomputed": pieces_summary(&recomputed), "stored": pieces_summary(stored) }))
        }
        Check::FiniteSupport { signal } => {
            let w = ctx.signal(signal)?;
            let pieces = w.support_pieces()?;
            let (lo, hi) = bounding_box(&pieces);
            (true, json!({ "pieces": pieces.len(), "lo": lo, "hi": hi }))
        }
        Check::Nonzero { signal } => {
            let w = ctx.signal(signal)?;
            (!w.is_zero(), pieces_summary(w))
        }
        Check::FourierMagnitudeEqual { lhs, rhs, grid } => {
            let a = ctx.signal(lhs)?;
            let grid = grid.unwrap_or_else(|| default_grid(a.dim()));
            let cmp = a.magnitude_check(ctx.signal(rhs)?, grid)?;
            (cmp.equal(), serde_json::to_value(&cmp).expect("serializable"))
        }
        Check::Associated { lhs, rhs, kind } => {
            let w = ctx.signal(lhs)?.association(ctx.signal(rhs)?, *kind)?;
            let cert = match &w {
                Some(w) => json!({
                    "kind": w.kind,
                    "phase": w.phase,
                    "alpha": w.alpha,
                    "shift": shift_text(&w.shift),
                }),
                None => Value::Null,
            };
            (w.is_some(), json!({ "witness": cert }))
        }
        Check::SelfConjAssociated { signal } => match signal {
            Some(name) => {
                let w = ctx.signal(name)?;
                let witness = w.association(w, Some(crate::lattice::AssociationKind::ConjReflect))?;
                let cert = witness.map(|w| {
                    json!({ "phase": w.phase, "alpha": w.alpha, "shift": shift_text(&w.shift) })
                });
                (cert.is_some(), json!({ "witness": cert }))
            }
            None => {
                let st = ctx.stencil()?;
                (st.kernel_self_conj_associated(), json!({ "taps": st.offsets().len() }))
            }
        },
        Check::PointwiseModulusEqual { lhs, rhs } => {
            let ok = ctx.signal(lhs)?.pointwise_modulus_equal(ctx.signal(rhs)?)?;
            (ok, Value::Null)
        }
        Check::SignalsEqual { lhs, rhs } => {
            let (a, b) = (ctx.signal(lhs)?, ctx.signal(rhs)?);
            (a.same_as(b), json!({ "lhs": pieces_summary(a), "rhs": pieces_summary(b) }))
        }
        Check::ConjReflection { signal, equals } => {
            let r = ctx.signal(signal)?.conj_reflect();
            (r.same_as(ctx.signal(equals)?), Value::Null)
        }
        Check::Combination { terms, equals } => {
            let target = ctx.signal(equals)?;
            let mut acc: Option<Signal> = None;
            for t in terms {
                let mut w = ctx.signal(&t.signal)?.scale(&t.coef);
                if let Some(y) = &t.shift {
                    w = w.translate(y)?;
                }
                acc = Some(match acc {
                    None => w,
                    Some(a) => a.add(&w)?,
                });
            }
            let acc = acc.ok_or_else(|| VerifyError::Malformed("combination without terms".into()))?;
            (acc.same_as(target), json!({ "terms": terms.len(), "result": pieces_summary(&acc) }))
        }
        Check::SupportWithin { signal, body } => {
            let ok = ctx.signal(signal)?.support_within(ctx.body(body)?)?;
            (ok, Value::Null)
        }
        Check::SupportWithinUnion { signal, bodies } => {
            let bodies = bodies
                .iter()
                .map(|b| ctx.body(b).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            (ctx.signal(signal)?.support_within_union(&bodies)?, json!({ "bodies": bodies.len() }))
        }
        Check::Problem3Geometry { d0, d } => {
            let rep = check_problem3_geometry(
                ctx.body(d0)?,
                ctx.body(d)?,
                ctx.bundle.mode == Mode::Discrete,
            )?;
            (rep.pass, serde_json::to_value(&rep).expect("serializable"))
        }
        Check::DistanceEquals { a, b, value } => {
            let dist = distance(ctx.body(a)?, ctx.body(b)?)?;
            let dev = (dist - value).abs();
            (dev <= tolerance::GEOMETRY, json!({ "distance": dist, "expected": value, "deviation": dev }))
        }
        Check::MaskedEqual { signal, body, equals } => {
            let masked = ctx.signal(signal)?.mask(ctx.body(body)?)?;
            (masked.same_as(ctx.signal(equals)?), json!({ "masked": pieces_summary(&masked) }))
        }
        Check::ReferenceSeparation { base, y_star } => {
            let sep = check_thm4_separation(ctx.body(base)?, &ctx.offsets_f64()?, &rat_f64(y_star))?;
            (sep.separated, json!({ "distance": sep.distance }))
        }
        Check::NoSymmetricTranslate { base, y_star } => {
            let out = check_remark5(ctx.body(base)?, &ctx.offsets_f64()?, &rat_f64(y_star))?;
            (out.pass(), serde_json::to_value(&out).expect("serializable"))
        }
        Check::BodySymmetric { body } => (ctx.body(body)?.is_symmetric(), Value::Null),
    })
}

fn bounding_box(pieces: &[ConvexBody]) -> (Vec<f64>, Vec<f64>) {
    let mut lo: Vec<f64> = Vec::new();
    let mut hi: Vec<f64> = Vec::new();
    for p in pieces {
        let (l, h) = p.bounding_box();
        if lo.is_empty() {
            lo = l;
            hi = h;
        } else {
            for i in 0..lo.len() {
                lo[i] = lo[i].min(l[i]);
                hi[i] = hi[i].max(h[i]);
            }
        }
    }
    (lo, hi)
}

fn run_claim(ctx: &Ctx, claim: &Claim) -> Result<ClaimResult, VerifyError> {
    let (observed, certificate) = evaluate(ctx, &claim.check)?;
    Ok(ClaimResult {
        name: claim.name.clone(),
        statement: claim.statement.clone(),
        verifier: claim.verifier.clone(),
        expected: claim.expected,
        observed,
        pass: observed == claim.expected,
        certificate,
    })
}

fn check_bundle(bundle: &Bundle) -> Result<(), VerifyError> {
    for (name, w) in &bundle.signals {
        if w.mode() != bundle.mode || w.dim() != bundle.dim {
            return Err(VerifyError::Malformed(format!(
                "signal `{name}` does not match the bundle mode/dimension"
            )));
        }
    }
    if let Some(st) = &bundle.stencil {
        if st.mode() != bundle.mode || st.dim() != bundle.dim {
            return Err(VerifyError::Malformed("stencil does not match the bundle mode/dimension".into()));
        }
    }
    for (name, b) in &bundle.bodies {
        if b.dim() != bundle.dim {
            return Err(VerifyError::Malformed(format!("body `{name}` has the wrong dimension")));
        }
    }
    Ok(())
}

/// Re-evaluates every claim of a bundle from its stored inputs.
pub fn run_claims(bundle: &Bundle) -> Result<VerificationReport, VerifyError> {
    check_bundle(bundle)?;
    let ctx = Ctx { bundle };
    let claims = bundle
        .claims
        .iter()
        .map(|c| run_claim(&ctx, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerificationReport {
        kind: bundle.kind,
        mode: bundle.mode,
        pass: claims.iter().all(|c| c.pass),
        claims,
        timing_ms: None,
    })
}

/// [`run_claims`] with the wall-clock time recorded.
pub fn run_claims_timed(bundle: &Bundle) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut report = run_claims(bundle)?;
    report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(report)
}
