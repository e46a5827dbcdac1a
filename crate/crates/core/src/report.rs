//! Validation and property-suite reports.
//!
//! A report is a list of violated laws, each with a human-readable witness.
//! An empty report means every checked law holds.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Every law checked by a validator or suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    // projections
    ProjectionSurjective,
    ProjectionIdentity,
    ProjectionComposition,
    // explicit possibility correspondence
    Confinement,
    GeneralizedReflexivity,
    Stationarity,
    ProjectionsPreserveIgnorance,
    ProjectionsPreserveKnowledge,
    ValuationBaseSpace,
    // implicit possibility correspondence
    Reflexivity,
    ImplicitStationarity,
    ProjectionsPreserveImplicitKnowledge,
    ExplicitMeasurability,
    ImplicitMeasurability,
    StrongConfinement,
    ImplicitPartition,
    ProjectionsPreserveImplicitIgnorance,
    ImplicitMatchesExplicitInsidePossibilitySet,
    Coherence,
    // awareness function
    LackOfConception,
    AwarenessMeasurability,
    AwarenessBelowLevel,
    AwarenessAboveLevel,
    AwarenessMonotone,
    // derived explicit correspondence
    DerivedPossibilityClause,
    // explicit knowledge and awareness
    KnowledgeBased,
    AwarenessBased,
    KnowledgeNecessitation,
    KnowledgeConjunction,
    KnowledgeTruth,
    KnowledgePositiveIntrospection,
    KnowledgeMonotonicity,
    WeakNegativeIntrospectionOne,
    KuIntrospection,
    AuIntrospection,
    WeakNecessitation,
    Plausibility,
    StrongPlausibility,
    WeakNegativeIntrospectionTwo,
    Symmetry,
    AwarenessConjunction,
    AkSelfReflection,
    AaSelfReflection,
    AwarenessIntrospection,
    PossibilityInComparableSpaces,
    // implicit knowledge
    ImplicitBased,
    ImplicitNecessitation,
    ImplicitConjunction,
    ImplicitMonotonicity,
    ImplicitTruth,
    ImplicitPositiveIntrospection,
    ImplicitNegativeIntrospection,
    ExplicitIsImplicitAndAware,
    UnawarenessImplicitlyKnown,
    AwarenessImplicitlyKnown,
    AwarenessOfImplicitKnowledge,
    // awareness function vs derived correspondence
    AwarenessFunctionMatchesDerived,
    ExplicitIsImplicitAndAwareFunction,
    // awareness structures
    RelationReflexive,
    RelationTransitive,
    RelationEuclidean,
    AwarenessConstantOnCells,
    AwarenessOutsideLanguage,
    ValuationOutsideLanguage,
    // bounded morphisms and categories
    Surjectivity,
    AtomicHarmony,
    AwarenessConsistency,
    Homomorphism,
    Back,
    MorphismIdentity,
    MorphismComposition,
    SublanguageInvariance,
    JoinEquivalence,
    MeetEquivalence,
    // transforms
    FormulaDisagreement,
    RoundTripMismatch,
    // logic
    SchemaCounterexample,
    RulePreservation,
}

impl Law {
    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: Law,
    pub witness: String,
}

/// Upper bound on recorded violations; further ones are counted only.
pub const MAX_RECORDED: usize = 256;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub suppressed: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, law: Law, witness: impl Into<String>) {
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation {
                law,
                witness: witness.into(),
            });
        } else {
            self.suppressed += 1;
        }
    }

    /// Records a violation when `holds` is false; the witness is built lazily.
    pub fn check(&mut self, holds: bool, law: Law, witness: impl FnOnce() -> String) {
        if !holds {
            self.push(law, witness());
        }
    }

    pub fn extend(&mut self, other: Report) {
        for v in other.violations {
            self.push(v.law, v.witness);
        }
        self.suppressed += other.suppressed;
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty() && self.suppressed == 0
    }

    pub fn len(&self) -> usize {
        self.violations.len() + self.suppressed
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn first(&self, law: Law) -> Option<&Violation> {
        self.violations.iter().find(|v| v.law == law)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "ok: no violations");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.law, v.witness)?;
        }
        if self.suppressed > 0 {
            writeln!(f, "... and {} more", self.suppressed)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_names_are_kebab_case() {
        assert_eq!(Law::ProjectionsPreserveIgnorance.name(), "projections-preserve-ignorance");
        assert_eq!(Law::KuIntrospection.to_string(), "ku-introspection");
    }

    #[test]
    fn report_round_trips_through_json() {
        let mut r = Report::new();
        r.push(Law::Back, "w0 -> w1");
        let text = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(r, back);
    }
}
