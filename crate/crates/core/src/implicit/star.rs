//! Structures with implicit knowledge `Λ*_i` and an awareness function `α_i`
//! as primitives, and the explicit correspondence `Π*_i` derived from them.

use crate::atoms::AtomSet;
use crate::error::{Error, ModelError, Result};
use crate::hms::lattice::{Event, Lattice, StateSet};
use crate::hms::model::{validate_possibility, Correspondence, Frame, HmsModel};
use crate::hms::ops::{awareness_set, ImplicitKnowledge, UnawarenessStructure};
use crate::hms::suite::{event_basis, Ctx, SuiteConfig};
use crate::implicit::complemented::{validate_implicit, validate_joint, ComplementedModel};
use crate::report::{Law, Report};

/// Lattice, valuation, `Λ*_i` and `α_i` for every agent.
#[derive(Clone, Debug)]
pub struct ImplicitModel {
    pub frame: Frame,
    pub lambda_star: Vec<Correspondence>,
    /// `α_i(ω)` indexed by agent then state.
    pub alpha: Vec<Vec<AtomSet>>,
}

impl ImplicitModel {
    pub fn new(frame: Frame, lambda_star: Vec<Correspondence>, alpha: Vec<Vec<AtomSet>>) -> Result<Self, ModelError> {
        let n = frame.agents.len();
        if lambda_star.len() != n || alpha.len() != n {
            return Err(ModelError::Missing("implicit correspondence and awareness function for every agent".into()));
        }
        let states = frame.lattice.state_count();
        let top = frame.lattice.top();
        for row in &alpha {
            if row.len() != states {
                return Err(ModelError::IncompleteMap("alpha".into()));
            }
            if let Some(bad) = row.iter().find(|sp| !sp.is_subset(top)) {
                return Err(ModelError::UnknownSpace(format!("{bad:?}")));
            }
        }
        Ok(ImplicitModel {
            frame,
            lambda_star,
            alpha,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.frame.lattice
    }

    /// Properties O and I to IV of every `α_i`.
    pub fn validate_alpha(&self) -> Report {
        let l = self.lattice();
        let mut report = Report::new();
        for (i, agent) in self.frame.agents.iter().enumerate() {
            let alpha = &self.alpha[i];
            for w in 0..l.state_count() {
                let own = l.space_of(w);
                let level = alpha[w];
                report.check(level.is_subset(own), Law::LackOfConception, || {
                    format!(
                        "agent {agent}: α({}) = `{}` is not below `{}`",
                        l.label(w),
                        l.key(level),
                        l.key(own)
                    )
                });
                for v in self.lambda_star[i].image(w).ones() {
                    report.check(alpha[v] == level, Law::AwarenessMeasurability, || {
                        format!(
                            "agent {agent}: {} ∈ Λ*({}) but α is `{}` vs `{}`",
                            l.label(v),
                            l.label(w),
                            l.key(alpha[v]),
                            l.key(level)
                        )
                    });
                }
                for psi in own.subsets() {
                    let wp = l.project(w, psi).expect("below own space");
                    if psi.is_subset(level) {
                        report.check(alpha[wp] == psi, Law::AwarenessBelowLevel, || {
                            format!(
                                "agent {agent}: α({}) = `{}` ⪰ `{}` but α({}) = `{}`",
                                l.label(w),
                                l.key(level),
                                l.key(psi),
                                l.label(wp),
                                l.key(alpha[wp])
                            )
                        });
                    }
                    if level.is_subset(psi) {
                        report.check(alpha[wp] == level, Law::AwarenessAboveLevel, || {
                            format!(
                                "agent {agent}: α({}) = `{}` ⪯ `{}` but α({}) = `{}`",
                                l.label(w),
                                l.key(level),
                                l.key(psi),
                                l.label(wp),
                                l.key(alpha[wp])
                            )
                        });
                    }
                    report.check(alpha[wp].is_subset(level), Law::AwarenessMonotone, || {
                        format!(
                            "agent {agent}: α({}) = `{}` exceeds α({}) = `{}`",
                            l.label(wp),
                            l.key(alpha[wp]),
                            l.label(w),
                            l.key(level)
                        )
                    });
                }
            }
        }
        report
    }

    /// Projection laws, valuation, the `Λ*_i` laws and the `α_i` laws.
    pub fn validate(&self) -> Report {
        let l = self.lattice();
        let mut report = l.validate();
        report.extend(self.frame.validate_valuation(false));
        for (i, agent) in self.frame.agents.iter().enumerate() {
            report.extend(validate_implicit(l, agent, &self.lambda_star[i]));
        }
        report.extend(self.validate_alpha());
        report
    }

    /// `Π*_i(ω) = Λ*_i(ω)_{α_i(ω)}` without any checks.
    pub fn pi_star_images(&self, agent: usize) -> Vec<StateSet> {
        let l = self.lattice();
        (0..l.state_count())
            .map(|w| l.project_set(self.lambda_star[agent].image(w), self.alpha[agent][w]))
            .collect()
    }

    /// Derives `Π*_i`, cross-checks the defining clause on every projection,
    /// and asserts the derived correspondence satisfies the explicit laws and
    /// joint measurability with `Λ*_i`.
    pub fn derive_pi_star(&self) -> Result<DerivedModel> {
        let pre = self.validate();
        if !pre.is_empty() {
            return Err(Error::PreconditionFailed(pre));
        }
        let l = self.lattice();
        let mut pi = Vec::with_capacity(self.frame.agents.len());
        for i in 0..self.frame.agents.len() {
            pi.push(Correspondence::new(l, self.pi_star_images(i), "Π*")?);
        }
        let derived = self.assemble(pi)?;
        let report = derived.check_derivation();
        if report.is_empty() {
            Ok(derived)
        } else {
            Err(Error::DerivationInconsistent(report))
        }
    }

    /// Pairs this model with a given explicit correspondence.
    pub fn assemble(&self, pi: Vec<Correspondence>) -> Result<DerivedModel> {
        let base = HmsModel::new(self.frame.clone(), pi)?;
        Ok(DerivedModel {
            complemented: ComplementedModel::new(base, self.lambda_star.clone())?,
            alpha: self.alpha.clone(),
        })
    }
}

/// An implicit-knowledge-based structure together with its `Π*_i`.
///
/// As an [`UnawarenessStructure`] the awareness operator is `A*_i`, computed
/// from `α_i`; knowledge uses `Π*_i` and implicit knowledge uses `Λ*_i`.
#[derive(Clone, Debug)]
pub struct DerivedModel {
    pub complemented: ComplementedModel,
    pub alpha: Vec<Vec<AtomSet>>,
}

impl DerivedModel {
    pub fn lattice(&self) -> &Lattice {
        self.complemented.lattice()
    }

    /// `A*_i(E)`.
    pub fn aware_star(&self, agent: usize, e: &Event) -> Event {
        self.aware(agent, e)
    }

    /// The defining clause on every projection, the explicit laws of `Π*_i`
    /// and joint measurability.
    pub fn check_derivation(&self) -> Report {
        let l = self.lattice();
        let mut report = Report::new();
        let agents = &self.complemented.base.frame.agents;
        for (i, agent) in agents.iter().enumerate() {
            let pi = &self.complemented.base.pi[i];
            let lambda = &self.complemented.lambda[i];
            let alpha = &self.alpha[i];
            for w in 0..l.state_count() {
                let own = l.space_of(w);
                for phi in own.subsets() {
                    let wp = l.project(w, phi).expect("below own space");
                    let expected = l.project_set(lambda.image(w), alpha[wp]);
                    report.check(pi.image(wp) == &expected, Law::DerivedPossibilityClause, || {
                        format!(
                            "agent {agent}: Π*({}) = {} but Λ*({})_{{{}}} = {}",
                            l.label(wp),
                            l.describe(pi.image(wp)),
                            l.label(w),
                            l.key(alpha[wp]),
                            l.describe(&expected)
                        )
                    });
                    if phi.is_subset(alpha[w]) {
                        let b = l.project_set(lambda.image(w), phi);
                        report.check(pi.image(wp) == &b, Law::DerivedPossibilityClause, || {
                            format!("agent {agent}: Π*({}) ≠ Λ*({})_{{{}}}", l.label(wp), l.label(w), l.key(phi))
                        });
                    }
                    if alpha[w].is_subset(phi) {
                        report.check(pi.image(wp) == pi.image(w), Law::DerivedPossibilityClause, || {
                            format!("agent {agent}: Π*({}) ≠ Π*({})", l.label(wp), l.label(w))
                        });
                    }
                }
            }
            report.extend(validate_possibility(l, agent, pi));
            report.extend(validate_joint(l, agent, pi, lambda));
        }
        report
    }

    /// The complemented structure with `α` dropped.
    pub fn into_complemented(self) -> ComplementedModel {
        self.complemented
    }
}

impl UnawarenessStructure for DerivedModel {
    fn lattice(&self) -> &Lattice {
        self.complemented.lattice()
    }
    fn agents(&self) -> &[String] {
        &self.complemented.base.frame.agents
    }
    fn valuation(&self, atom: usize) -> &Event {
        &self.complemented.base.frame.valuation[atom]
    }
    fn possibility(&self, agent: usize, state: usize) -> &StateSet {
        self.complemented.base.pi[agent].image(state)
    }
    fn aware_set(&self, agent: usize, e: &Event) -> StateSet {
        awareness_set(self.lattice(), |w| Some(self.alpha[agent][w]), e)
    }
}

impl ImplicitKnowledge for DerivedModel {
    fn implicit_possibility(&self, agent: usize, state: usize) -> &StateSet {
        self.complemented.lambda[agent].image(state)
    }
}

/// `A*_i = A_i` and `K_i = L*_i ∩ A*_i` over the event basis, where `A_i` and
/// `K_i` come from `Π*_i`.
pub fn derivation_laws(d: &DerivedModel, cfg: &SuiteConfig) -> Report {
    let l = d.lattice();
    let explicit = &d.complemented;
    let basis = event_basis(d, cfg.event_cap);
    let mut report = d.check_derivation();
    for (i, agent) in d.agents().iter().enumerate() {
        let cx = Ctx { l, agent };
        for e in &basis {
            let a_star = d.aware(i, e);
            let a = explicit.aware(i, e);
            cx.same(&mut report, Law::AwarenessFunctionMatchesDerived, e, &a_star, &a);
            cx.based(&mut report, Law::AwarenessBased, e, &a_star, &d.aware_set(i, e));
            let k = explicit.knows(i, e);
            let mut la = cx.ext(&d.implicit_knows(i, e));
            la.intersect_with(&cx.ext(&a_star));
            report.check(cx.ext(&k) == la, Law::ExplicitIsImplicitAndAwareFunction, || {
                format!(
                    "agent {agent}, E = {}: K(E) = {} but L*(E) ∩ A*(E) = {}",
                    cx.show(e),
                    cx.show(&k),
                    l.describe(&la)
                )
            });
        }
    }
    report
}

/// Derives `Π*` and checks its laws. A failed derivation is returned as its
/// report.
pub fn derivation_suite(im: &ImplicitModel, cfg: &SuiteConfig) -> Result<Report> {
    match im.derive_pi_star() {
        Ok(d) => Ok(derivation_laws(&d, cfg)),
        Err(Error::DerivationInconsistent(report)) => Ok(report),
        Err(e) => Err(e),
    }
}
