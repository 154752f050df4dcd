use std::collections::BTreeMap;

use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::geometry::ConvexBody;
use crate::lattice::AssociationKind;
use crate::scalar::{rat_vec_serde, Scalar};
use crate::signal::{Mode, Operator, Signal};

/// Which construction produced a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Thm1,
    Thm2,
    Example1,
    Example2,
    Thm3,
    Thm4,
}

/// `coef · signal(x − shift)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub signal: String,
    pub coef: Scalar,
    #[serde(default, with = "opt_rat_vec", skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<BigRational>>,
}

impl Term {
    pub fn new(signal: &str, coef: Scalar) -> Term {
        Term {
            signal: signal.to_string(),
            coef,
            shift: None,
        }
    }

    pub fn shifted(signal: &str, coef: Scalar, shift: Vec<BigRational>) -> Term {
        Term {
            signal: signal.to_string(),
            coef,
            shift: Some(shift),
        }
    }
}

mod opt_rat_vec {
    use super::*;

    pub fn serialize<S: serde::Serializer>(
        v: &Option<Vec<BigRational>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => rat_vec_serde::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<BigRational>>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "rat_vec_serde")] Vec<BigRational>);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

/// A machine-checkable statement about named signals and bodies of a bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Check {
    /// `output = Lψ` (or `L*ψ`) for the bundle stencil.
    ReproducesStencil {
        output: String,
        input: String,
        #[serde(default)]
        adjoint: bool,
    },
    FiniteSupport { signal: String },
    Nonzero { signal: String },
    /// `|ĥ₁|² ≡ |ĥ₂|² ≢ 0`.
    FourierMagnitudeEqual {
        lhs: String,
        rhs: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<usize>,
    },
    /// Some trivial-ambiguity witness maps `lhs` onto `rhs`.
    Associated {
        lhs: String,
        rhs: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kind: Option<AssociationKind>,
    },
    /// The named signal, or the stencil kernel when absent, is conjugate-
    /// reflection associated to itself.
    SelfConjAssociated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signal: Option<String>,
    },
    PointwiseModulusEqual { lhs: String, rhs: String },
    SignalsEqual { lhs: String, rhs: String },
    /// `equals = w̃`, `w̃(x) = conj(w(−x))`.
    ConjReflection { signal: String, equals: String },
    /// `equals = Σ coef · signal(x − shift)`.
    Combination { terms: Vec<Term>, equals: String },
    SupportWithin { signal: String, body: String },
    SupportWithinUnion { signal: String, bodies: Vec<String> },
    /// `0 < dist(D, D₀) < diam(D)`.
    Problem3Geometry { d0: String, d: String },
    DistanceEquals { a: String, b: String, value: f64 },
    /// `χ_body · signal = equals`.
    MaskedEqual {
        signal: String,
        body: String,
        equals: String,
    },
    /// `B + y*` is separated from the hull of the other stencil translates.
    ReferenceSeparation {
        base: String,
        #[serde(with = "rat_vec_serde")]
        y_star: Vec<BigRational>,
    },
    /// Under separation and `T ≠ −T`, no translate of `−T` equals `T`.
    NoSymmetricTranslate {
        base: String,
        #[serde(with = "rat_vec_serde")]
        y_star: Vec<BigRational>,
    },
    BodySymmetric { body: String },
}

impl Check {
    pub fn type_name(&self) -> &'static str {
        match self {
            Check::ReproducesStencil { .. } => "reproduces_stencil",
            Check::FiniteSupport { .. } => "finite_support",
            Check::Nonzero { .. } => "nonzero",
            Check::FourierMagnitudeEqual { .. } => "fourier_magnitude_equal",
            Check::Associated { .. } => "associated",
            Check::SelfConjAssociated { .. } => "self_conj_associated",
            Check::PointwiseModulusEqual { .. } => "pointwise_modulus_equal",
            Check::SignalsEqual { .. } => "signals_equal",
            Check::ConjReflection { .. } => "conj_reflection",
            Check::Combination { .. } => "combination",
            Check::SupportWithin { .. } => "support_within",
            Check::SupportWithinUnion { .. } => "support_within_union",
            Check::Problem3Geometry { .. } => "problem3_geometry",
            Check::DistanceEquals { .. } => "distance_equals",
            Check::MaskedEqual { .. } => "masked_equal",
            Check::ReferenceSeparation { .. } => "reference_separation",
            Check::NoSymmetricTranslate { .. } => "no_symmetric_translate",
            Check::BodySymmetric { .. } => "body_symmetric",
        }
    }

    /// `module::operation` that decides this check in the given setting.
    pub fn verifier(&self, mode: Mode) -> &'static str {
        let discrete = mode == Mode::Discrete;
        match self {
            Check::ReproducesStencil { adjoint: false, .. } => {
                if discrete {
                    "lattice::apply_stencil"
                } else {
                    "continuous::apply_continuous"
                }
            }
            Check::ReproducesStencil { adjoint: true, .. } => {
                if discrete {
                    "lattice::apply_adjoint"
                } else {
                    "continuous::apply_continuous_adjoint"
                }
            }
            Check::FiniteSupport { .. } | Check::Nonzero { .. } => "signal::Signal::len",
            Check::FourierMagnitudeEqual { .. } => {
                if discrete {
                    "lattice::compare_fourier_magnitude"
                } else {
                    "continuous::exact_magnitude|sampled_magnitude"
                }
            }
            Check::Associated { .. } | Check::SelfConjAssociated { .. } => {
                if discrete {
                    "lattice::find_association"
                } else {
                    "continuous::find_continuous_association"
                }
            }
            Check::PointwiseModulusEqual { .. } => "continuous::pointwise_modulus_equal",
            Check::SignalsEqual { .. } | Check::Combination { .. } => "signal::Signal::same_as",
            Check::ConjReflection { .. } => "signal::Signal::conj_reflect",
            Check::SupportWithin { .. } | Check::SupportWithinUnion { .. } => {
                "geometry::ConvexBody::contains_body"
            }
            Check::Problem3Geometry { .. } => "geometry::check_problem3_geometry",
            Check::DistanceEquals { .. } => "geometry::distance",
            Check::MaskedEqual { .. } => "signal::Signal::mask",
            Check::ReferenceSeparation { .. } => "geometry::check_thm4_separation",
            Check::NoSymmetricTranslate { .. } => "geometry::check_remark5",
            Check::BodySymmetric { .. } => "geometry::ConvexBody::is_symmetric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub statement: String,
    pub expected: bool,
    pub verifier: String,
    pub check: Check,
}

/// Everything needed to re-verify a construction from scratch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub kind: Kind,
    pub mode: Mode,
    pub dim: usize,
    #[serde(default)]
    pub parameters: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stencil: Option<Operator>,
    pub signals: BTreeMap<String, Signal>,
    #[serde(default)]
    pub bodies: BTreeMap<String, ConvexBody>,
    pub claims: Vec<Claim>,
}

impl Bundle {
    pub(crate) fn new(kind: Kind, mode: Mode, dim: usize) -> Bundle {
        Bundle {
            kind,
            mode,
            dim,
            parameters: BTreeMap::new(),
            stencil: None,
            signals: BTreeMap::new(),
            bodies: BTreeMap::new(),
            claims: Vec::new(),
        }
    }

    pub(crate) fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("parameters serialize");
        self.parameters.insert(key.to_string(), v);
    }

    pub(crate) fn signal(&mut self, name: &str, s: &Signal) {
        self.signals.insert(name.to_string(), s.clone());
    }

    pub(crate) fn body(&mut self, name: &str, b: &ConvexBody) {
        self.bodies.insert(name.to_string(), b.clone());
    }

    pub(crate) fn claim(&mut self, name: &str, statement: &str, expected: bool, check: Check) {
        self.claims.push(Claim {
            name: name.to_string(),
            statement: statement.to_string(),
            expected,
            verifier: check.verifier(self.mode).to_string(),
            check,
        });
    }

    pub fn claim_names(&self) -> Vec<&str> {
        self.claims.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn find_claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

pub(crate) fn s(name: &str) -> String {
    name.to_string()
}
