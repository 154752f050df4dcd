use serde::{Deserialize, Serialize};

/// A premise of one of the constructions. Names are stable identifiers used
/// in diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    KernelNotSelfAssociated,
    PsiNotSelfAssociated,
    PsiNonzero,
    SymmetricOffsets,
    ModulusSymmetry,
    NoCommonConjugatePhase,
    DisjointTranslates,
    NonzeroOffsets,
    NonzeroCoefficients,
    DistinctTapModuli,
    DistinctPsiModuli,
    PositiveRadius,
    RealOuterTap,
    UnitPhase,
    PhaseBreaksCentralSymmetry,
    SupportInBall,
    RadiusBelowHalfShift,
    NestedPsiGeometry,
    SupportInU0,
    SupportInU1,
    SymmetricU1,
    PositiveSeparation,
    PhiNotConjSymmetric,
    PhiNonzero,
    SupportInBase,
    ReferenceOffsetInT,
    ReferenceOffsetInMinusT,
    SeparatedReference,
    ConjugateReferenceTaps,
    ModeConsistency,
}

impl Condition {
    pub const ALL: [Condition; 30] = [
        Condition::KernelNotSelfAssociated,
        Condition::PsiNotSelfAssociated,
        Condition::PsiNonzero,
        Condition::SymmetricOffsets,
        Condition::ModulusSymmetry,
        Condition::NoCommonConjugatePhase,
        Condition::DisjointTranslates,
        Condition::NonzeroOffsets,
        Condition::NonzeroCoefficients,
        Condition::DistinctTapModuli,
        Condition::DistinctPsiModuli,
        Condition::PositiveRadius,
        Condition::RealOuterTap,
        Condition::UnitPhase,
        Condition::PhaseBreaksCentralSymmetry,
        Condition::SupportInBall,
        Condition::RadiusBelowHalfShift,
        Condition::NestedPsiGeometry,
        Condition::SupportInU0,
        Condition::SupportInU1,
        Condition::SymmetricU1,
        Condition::PositiveSeparation,
        Condition::PhiNotConjSymmetric,
        Condition::PhiNonzero,
        Condition::SupportInBase,
        Condition::ReferenceOffsetInT,
        Condition::ReferenceOffsetInMinusT,
        Condition::SeparatedReference,
        Condition::ConjugateReferenceTaps,
        Condition::ModeConsistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::KernelNotSelfAssociated => "kernel-not-self-associated",
            Condition::PsiNotSelfAssociated => "psi-not-self-associated",
            Condition::PsiNonzero => "psi-nonzero",
            Condition::SymmetricOffsets => "symmetric-offsets",
            Condition::ModulusSymmetry => "modulus-symmetry",
            Condition::NoCommonConjugatePhase => "no-common-conjugate-phase",
            Condition::DisjointTranslates => "disjoint-translates",
            Condition::NonzeroOffsets => "nonzero-offsets",
            Condition::NonzeroCoefficients => "nonzero-coefficients",
            Condition::DistinctTapModuli => "distinct-tap-moduli",
            Condition::DistinctPsiModuli => "distinct-psi-moduli",
            Condition::PositiveRadius => "positive-radius",
            Condition::RealOuterTap => "real-outer-tap",
            Condition::UnitPhase => "unit-phase",
            Condition::PhaseBreaksCentralSymmetry => "phase-breaks-central-symmetry",
            Condition::SupportInBall => "support-in-ball",
            Condition::RadiusBelowHalfShift => "radius-below-half-shift",
            Condition::NestedPsiGeometry => "nested-psi-geometry",
            Condition::SupportInU0 => "support-in-u0",
            Condition::SupportInU1 => "support-in-u1",
            Condition::SymmetricU1 => "symmetric-u1",
            Condition::PositiveSeparation => "positive-separation",
            Condition::PhiNotConjSymmetric => "phi-not-conj-symmetric",
            Condition::PhiNonzero => "phi-nonzero",
            Condition::SupportInBase => "support-in-base",
            Condition::ReferenceOffsetInT => "reference-offset-in-t",
            Condition::ReferenceOffsetInMinusT => "reference-offset-in-minus-t",
            Condition::SeparatedReference => "separated-reference",
            Condition::ConjugateReferenceTaps => "conjugate-reference-taps",
            Condition::ModeConsistency => "mode-consistency",
        }
    }

    /// The premise in mathematical notation.
    pub fn statement(self) -> &'static str {
        match self {
            Condition::KernelNotSelfAssociated => {
                "σ(x) = Σ a_y δ(x + y) is not conjugate-reflection associated to itself"
            }
            Condition::PsiNotSelfAssociated => {
                "ψ is not conjugate-reflection associated to itself"
            }
            Condition::PsiNonzero => "ψ ≠ 0",
            Condition::SymmetricOffsets => "T = −T",
            Condition::ModulusSymmetry => "|a_y| = |a_{−y}| for every y ∈ T",
            Condition::NoCommonConjugatePhase => {
                "there is no α with a_y = e^{iα} conj(a_{−y}) for every y ∈ T"
            }
            Condition::DisjointTranslates => {
                "(supp ψ − y_i) ∩ (supp ψ − y_j) = ∅ for distinct y_i, y_j ∈ T"
            }
            Condition::NonzeroOffsets => "y ≠ 0 and z ≠ 0",
            Condition::NonzeroCoefficients => "a₁, a₂, b₁, b₂ ≠ 0",
            Condition::DistinctTapModuli => "|a₁| ≠ |a₂|",
            Condition::DistinctPsiModuli => "|b₁| ≠ |b₂|",
            Condition::PositiveRadius => "r > 0",
            Condition::RealOuterTap => "a₂ ∈ R \\ {0} and a₁ ≠ 0",
            Condition::UnitPhase => "|e^{iφ}| = 1",
            Condition::PhaseBreaksCentralSymmetry => "a₁ ≠ conj(a₁) e^{iφ}",
            Condition::SupportInBall => "supp ψ ⊂ B_ρ(a)",
            Condition::RadiusBelowHalfShift => "0 < ρ < |y|/2",
            Condition::NestedPsiGeometry => "z = 2a, |z| < 2ρ, r ≤ ρ − |z|/2",
            Condition::SupportInU0 => "supp ψ ⊂ U₀",
            Condition::SupportInU1 => "supp φ ⊂ U₁",
            Condition::SymmetricU1 => "U₁ = −U₁",
            Condition::PositiveSeparation => "dist(U₁, U₀) > 0",
            Condition::PhiNotConjSymmetric => "φ ≠ φ̃, where φ̃(x) = conj(φ(−x))",
            Condition::PhiNonzero => "φ ≠ 0",
            Condition::SupportInBase => "supp ψ ⊂ B",
            Condition::ReferenceOffsetInT => "y* ∈ T",
            Condition::ReferenceOffsetInMinusT => "y* ∈ −T",
            Condition::SeparatedReference => {
                "D₀ ∩ D = ∅ with D₀ = B + y*, D = ch(⋃ (B + y)), y ∈ (T ∪ −T) \\ {y*}"
            }
            Condition::ConjugateReferenceTaps => "a_{−y*} = e^{iφ} conj(a_{y*})",
            Condition::ModeConsistency => {
                "stencil and signals live in the same setting and dimension"
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_serialize_as_names() {
        let mut names: Vec<_> = Condition::ALL.iter().map(|c| c.name()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), Condition::ALL.len());
        for c in Condition::ALL {
            assert_eq!(serde_json::to_value(c).unwrap(), c.name());
        }
    }
}
