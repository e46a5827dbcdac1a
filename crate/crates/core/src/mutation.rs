//! Single-point semantic mutations and the suites that catch them.
//!
//! Operator-level mutations wrap a complemented model and replace one
//! operator; data-level mutations corrupt one ingredient of a transform or a
//! category. [`detect`] runs every relevant suite on fixed subjects and lists
//! which ones report a violation. A mutation nobody catches is a gap in the
//! suites.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atoms::AtomSet;
use crate::enumerate::EnumConfig;
use crate::error::Result;
use crate::fh::category::{build_category, category_equivalence_suite};
use crate::fh::model::FhModel;
use crate::fixtures::{fig1l, fig1r};
use crate::genmodels::{gen_fh, gen_hms, Caps};
use crate::hms::lattice::{Event, Lattice, StateSet};
use crate::hms::ops::{knowledge_set, ImplicitKnowledge, UnawarenessStructure};
use crate::hms::suite::{explicit_laws, SuiteConfig};
use crate::implicit::{derivation_laws, implicit_laws, ComplementedModel};
use crate::lpa::fuzz::{check_schemata, LatticeOracle};
use crate::report::{Report, Violation};
use crate::semantics::EventModel;
use crate::transforms::{
    equivalence_check, fh_transform, truncated_hms_transform, ModelRef, Transform,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// `K_i(E)` with no state knowing `E` becomes the empty event of the
    /// bottom space instead of `∅^{S(E)}`.
    KnowledgeFallbackDropped,
    /// `A_i` of a vacuous event is vacuous.
    AwarenessDeniesVacuous,
    /// `L_i` reads `Π_i` instead of `Λ_i`.
    ImplicitUsesExplicit,
    /// `¬E` is complemented inside the top space rather than in `S(E)`.
    NegationInTopSpace,
    /// Awareness of one cell of a proper sublanguage model is changed after
    /// the category is built.
    MorphismAwarenessBroken,
    /// The FH transform loses one non-reflexive pair of `R_i`.
    FhTransformDropsLambdaPair,
    /// `Π*_i(ω)` is taken as `Λ*_i(ω)` without projecting to `α_i(ω)`.
    PiStarIgnoresAwareness,
    /// The T-transform sets `α_i(ω)` to the whole space of `ω`.
    TTransformFullAwareness,
}

impl Mutation {
    pub const ALL: [Mutation; 8] = [
        Mutation::KnowledgeFallbackDropped,
        Mutation::AwarenessDeniesVacuous,
        Mutation::ImplicitUsesExplicit,
        Mutation::NegationInTopSpace,
        Mutation::MorphismAwarenessBroken,
        Mutation::FhTransformDropsLambdaPair,
        Mutation::PiStarIgnoresAwareness,
        Mutation::TTransformFullAwareness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::KnowledgeFallbackDropped => "knowledge-fallback-dropped",
            Mutation::AwarenessDeniesVacuous => "awareness-denies-vacuous",
            Mutation::ImplicitUsesExplicit => "implicit-uses-explicit",
            Mutation::NegationInTopSpace => "negation-in-top-space",
            Mutation::MorphismAwarenessBroken => "morphism-awareness-broken",
            Mutation::FhTransformDropsLambdaPair => "fh-transform-drops-lambda-pair",
            Mutation::PiStarIgnoresAwareness => "pi-star-ignores-awareness",
            Mutation::TTransformFullAwareness => "t-transform-full-awareness",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mutation `{s}`"))
    }
}

/// A complemented model with one operator replaced.
pub struct Mutant<'a> {
    pub inner: &'a ComplementedModel,
    pub mutation: Mutation,
}

impl UnawarenessStructure for Mutant<'_> {
    fn lattice(&self) -> &Lattice {
        self.inner.lattice()
    }
    fn agents(&self) -> &[String] {
        self.inner.agents()
    }
    fn valuation(&self, atom: usize) -> &Event {
        self.inner.valuation(atom)
    }
    fn possibility(&self, agent: usize, state: usize) -> &StateSet {
        self.inner.possibility(agent, state)
    }
    fn knows(&self, agent: usize, e: &Event) -> Event {
        let l = self.lattice();
        let set = self.knows_set(agent, e);
        if self.mutation == Mutation::KnowledgeFallbackDropped && set.is_clear() {
            return l.vacuous(AtomSet::EMPTY);
        }
        l.based_or_vacuous(e.space(), &set)
    }
    fn aware(&self, agent: usize, e: &Event) -> Event {
        let l = self.lattice();
        if self.mutation == Mutation::AwarenessDeniesVacuous && e.is_vacuous() {
            return l.vacuous(e.space());
        }
        l.based_or_vacuous(e.space(), &self.aware_set(agent, e))
    }
    fn negate(&self, e: &Event) -> Event {
        let l = self.lattice();
        if self.mutation == Mutation::NegationInTopSpace {
            let mut rest = l.space_set(l.top());
            rest.difference_with(&l.up_closure(e));
            return l.event_restricting(l.top(), &rest);
        }
        l.negate(e)
    }
}

impl ImplicitKnowledge for Mutant<'_> {
    fn implicit_possibility(&self, agent: usize, state: usize) -> &StateSet {
        if self.mutation == Mutation::ImplicitUsesExplicit {
            self.inner.possibility(agent, state)
        } else {
            self.inner.implicit_possibility(agent, state)
        }
    }
    fn implicit_set(&self, agent: usize, e: &Event) -> StateSet {
        knowledge_set(self.lattice(), |w| self.implicit_possibility(agent, w), e)
    }
}

impl EventModel for Mutant<'_> {
    fn implicit_event(&self, agent: usize, e: &Event) -> Option<Event> {
        Some(self.implicit_knows(agent, e))
    }
}

/// The suites that reported a mutation, each with its first violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detection {
    pub mutation: Mutation,
    pub caught_by: Vec<(String, Violation)>,
}

impl Detection {
    pub fn caught(&self) -> bool {
        !self.caught_by.is_empty()
    }
}

fn note(caught: &mut Vec<(String, Violation)>, suite: &str, report: &Report) {
    if let Some(v) = report.violations.first() {
        if !caught.iter().any(|(s, _)| s == suite) {
            caught.push((suite.to_string(), v.clone()));
        }
    }
}

fn operator_subjects() -> Result<Vec<ComplementedModel>> {
    let mut out = vec![fig1l(), fig1r()];
    for seed in 0..4 {
        out.push(gen_hms(seed, Caps::new(2, 4, 2))?);
    }
    Ok(out)
}

fn fh_subjects() -> Result<Vec<FhModel>> {
    let mut out = vec![fh_transform(&fig1l())?, fh_transform(&fig1r())?];
    for seed in 0..4 {
        out.push(gen_fh(seed, Caps::new(2, 4, 2))?);
    }
    Ok(out)
}

/// Runs the suites that could observe `m` and records which ones fire.
pub fn detect(m: Mutation) -> Result<Detection> {
    let cfg = SuiteConfig::default();
    let depth2 = EnumConfig::with_depth(2);
    let mut caught = Vec::new();
    match m {
        Mutation::KnowledgeFallbackDropped
        | Mutation::AwarenessDeniesVacuous
        | Mutation::ImplicitUsesExplicit
        | Mutation::NegationInTopSpace => {
            for (n, subject) in operator_subjects()?.iter().enumerate() {
                let mutant = Mutant {
                    inner: subject,
                    mutation: m,
                };
                note(&mut caught, "explicit-suite", &explicit_laws(&mutant, &cfg));
                note(&mut caught, "implicit-suite", &implicit_laws(&mutant, &cfg));
                let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
                let mut report = Report::new();
                check_schemata(&LatticeOracle(&mutant), &mut rng, 2, 8, &mut report)?;
                note(&mut caught, "lpa-soundness", &report);
            }
        }
        Mutation::MorphismAwarenessBroken => {
            for k in fh_subjects()? {
                let Some(c) = break_one_morphism(&k)? else { continue };
                note(&mut caught, "category-validate", &c.validate());
                note(&mut caught, "category-equivalence", &category_equivalence_suite(&c, &depth2));
            }
        }
        Mutation::FhTransformDropsLambdaPair => {
            for subject in operator_subjects()? {
                let mut k = fh_transform(&subject)?;
                if !drop_one_pair(&mut k) {
                    continue;
                }
                let r = equivalence_check(ModelRef::Complemented(&subject), ModelRef::Fh(&k), Transform::Fh, &depth2)?;
                note(&mut caught, "transform-equivalence", &r);
                note(&mut caught, "fh-validate", &k.validate());
            }
        }
        Mutation::PiStarIgnoresAwareness => {
            for k in fh_subjects()? {
                let im = truncated_hms_transform(&k, true)?;
                let d = im.assemble(im.lambda_star.clone())?;
                note(&mut caught, "derivation-suite", &derivation_laws(&d, &cfg));
            }
        }
        Mutation::TTransformFullAwareness => {
            for k in fh_subjects()? {
                let mut im = truncated_hms_transform(&k, true)?;
                let l = im.lattice().clone();
                for row in &mut im.alpha {
                    for (s, level) in row.iter_mut().enumerate() {
                        *level = l.space_of(s);
                    }
                }
                let pre = im.validate();
                note(&mut caught, "implicit-validate", &pre);
                if pre.is_empty() {
                    let r = equivalence_check(ModelRef::Fh(&k), ModelRef::Implicit(&im), Transform::ImplicitHms, &depth2)?;
                    note(&mut caught, "transform-equivalence", &r);
                }
            }
        }
    }
    Ok(Detection {
        mutation: m,
        caught_by: caught,
    })
}

/// Flips awareness of the first atom on one cell of the first agent in a
/// nonempty proper sublanguage model. `None` if the universe is too small.
fn break_one_morphism(k: &FhModel) -> Result<Option<crate::fh::FhCategory>> {
    let mut c = build_category(k, true)?;
    let Some(psi) = c.languages().find(|p| !p.is_empty() && *p != c.top) else {
        return Ok(None);
    };
    let model = c.models[psi.index()].as_mut().expect("sublanguage model");
    let atom = AtomSet::singleton(psi.iter().next().expect("nonempty"));
    let cell = model.relations[0][0].clone();
    let level = model.awareness[0][0];
    let flipped = if atom.is_subset(level) { level.difference(atom) } else { level.union(atom) };
    for w in cell.ones() {
        model.awareness[0][w] = flipped;
    }
    debug_assert!(model.validate().is_empty());
    Ok(Some(c))
}

/// Removes one pair `(w, t)`, `w ≠ t`, from some `R_i`.
fn drop_one_pair(k: &mut FhModel) -> bool {
    for rows in &mut k.relations {
        for (w, row) in rows.iter_mut().enumerate() {
            if let Some(t) = row.ones().find(|&t| t != w) {
                row.set(t, false);
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unmutated_wrapper_passes_every_suite() {
        let cfg = SuiteConfig::default();
        for subject in operator_subjects().unwrap() {
            // any mutation name works; only the selected operator changes
            let plain = Mutant {
                inner: &subject,
                mutation: Mutation::MorphismAwarenessBroken,
            };
            assert!(explicit_laws(&plain, &cfg).is_empty());
            assert!(implicit_laws(&plain, &cfg).is_empty());
        }
    }

    #[test]
    fn every_mutation_is_caught() {
        for m in Mutation::ALL {
            let d = detect(m).unwrap();
            eprintln!("{m}: {:?}", d.caught_by.iter().map(|(s, v)| format!("{s} [{}] {}", v.law, v.witness)).collect::<Vec<_>>());
            assert!(d.caught(), "{m}");
        }
    }

    #[test]
    fn names_round_trip() {
        for m in Mutation::ALL {
            assert_eq!(m.name().parse::<Mutation>().unwrap(), m);
        }
    }
}
