//! Unawareness structures complemented with implicit possibility
//! correspondences `Λ_i`.

use crate::error::{Error, Result};
use crate::hms::lattice::{Event, Lattice, StateSet};
use crate::hms::model::{Correspondence, HmsModel};
use crate::hms::ops::{ImplicitKnowledge, UnawarenessStructure};
use crate::hms::suite::{event_basis, families, Ctx, SuiteConfig};
use crate::report::{Law, Report};

/// An unawareness structure with one `Λ_i` per agent.
#[derive(Clone, Debug)]
pub struct ComplementedModel {
    pub base: HmsModel,
    pub lambda: Vec<Correspondence>,
}

impl ComplementedModel {
    pub fn new(base: HmsModel, lambda: Vec<Correspondence>) -> Result<Self> {
        if lambda.len() != base.frame.agents.len() {
            return Err(crate::ModelError::Missing("implicit correspondence for every agent".into()).into());
        }
        Ok(ComplementedModel { base, lambda })
    }

    pub fn lattice(&self) -> &Lattice {
        self.base.lattice()
    }

    /// The primitive and derived laws of every `Λ_i`, jointly with `Π_i`.
    pub fn validate_lambda(&self) -> Report {
        let l = self.lattice();
        let mut report = Report::new();
        for (i, agent) in self.base.frame.agents.iter().enumerate() {
            report.extend(validate_implicit(l, agent, &self.lambda[i]));
            report.extend(validate_joint(l, agent, &self.base.pi[i], &self.lambda[i]));
        }
        report
    }

    /// Base structure laws followed by [`validate_lambda`](Self::validate_lambda).
    pub fn validate(&self) -> Report {
        let mut report = self.base.validate();
        report.extend(self.validate_lambda());
        report
    }
}

impl UnawarenessStructure for ComplementedModel {
    fn lattice(&self) -> &Lattice {
        self.base.lattice()
    }
    fn agents(&self) -> &[String] {
        &self.base.frame.agents
    }
    fn valuation(&self, atom: usize) -> &Event {
        &self.base.frame.valuation[atom]
    }
    fn possibility(&self, agent: usize, state: usize) -> &StateSet {
        self.base.pi[agent].image(state)
    }
}

impl ImplicitKnowledge for ComplementedModel {
    fn implicit_possibility(&self, agent: usize, state: usize) -> &StateSet {
        self.lambda[agent].image(state)
    }
}

/// Reflexivity, Stationarity and Projections Preserve Implicit Knowledge,
/// plus their consequences Strong Confinement, the partition property and
/// Projections Preserve Implicit Ignorance.
pub fn validate_implicit(l: &Lattice, agent: &str, corr: &Correspondence) -> Report {
    let mut report = Report::new();
    for w in 0..l.state_count() {
        let own = l.space_of(w);
        let img = corr.image(w);
        report.check(img.contains(w), Law::Reflexivity, || {
            format!("agent {agent}: {} ∉ Λ({})", l.label(w), l.label(w))
        });
        for v in img.ones() {
            report.check(corr.image(v) == img, Law::ImplicitStationarity, || {
                format!("agent {agent}: {} ∈ Λ({}) but Λ differs", l.label(v), l.label(w))
            });
        }
        for psi in own.subsets() {
            let wp = l.project(w, psi).expect("below own space");
            let projected = l.project_set(img, psi);
            report.check(&projected == corr.image(wp), Law::ProjectionsPreserveImplicitKnowledge, || {
                format!(
                    "agent {agent}: Λ({})_{{{}}} = {} but Λ({}) = {}",
                    l.label(w),
                    l.key(psi),
                    l.describe(&projected),
                    l.label(wp),
                    l.describe(corr.image(wp))
                )
            });
        }

        let confined = img.ones().all(|v| l.space_of(v) == own);
        report.check(confined, Law::StrongConfinement, || {
            format!("agent {agent}: Λ({}) = {} leaves `{}`", l.label(w), l.describe(img), l.key(own))
        });
        for v in l.states_in(own) {
            let other = corr.image(v);
            report.check(other == img || other.is_disjoint(img), Law::ImplicitPartition, || {
                format!(
                    "agent {agent}: Λ({}) and Λ({}) overlap without being equal",
                    l.label(w),
                    l.label(v)
                )
            });
        }
        if confined {
            let up = l.up_of(own, img);
            for psi in own.subsets() {
                let wp = l.project(w, psi).expect("below own space");
                let below = corr.image(wp);
                let Some(sp) = l.set_space(below) else {
                    continue;
                };
                report.check(up.is_subset(&l.up_of(sp, below)), Law::ProjectionsPreserveImplicitIgnorance, || {
                    format!("agent {agent}: Λ↑({}) ⊄ Λ↑({})", l.label(w), l.label(wp))
                });
            }
        }
    }
    report
}

/// Explicit and Implicit Measurability, plus the consequences that `Λ` and
/// `Π` agree inside possibility sets and Coherence.
pub fn validate_joint(l: &Lattice, agent: &str, pi: &Correspondence, lambda: &Correspondence) -> Report {
    let mut report = Report::new();
    for w in 0..l.state_count() {
        for v in lambda.image(w).ones() {
            report.check(pi.image(v) == pi.image(w), Law::ExplicitMeasurability, || {
                format!("agent {agent}: {} ∈ Λ({}) but Π differs", l.label(v), l.label(w))
            });
        }
        let img = pi.image(w);
        let Some(level) = l.set_space(img).filter(|sp| sp.is_subset(l.space_of(w))) else {
            continue;
        };
        let lam_level = l.project_set(lambda.image(w), level);
        for v in img.ones() {
            report.check(lambda.image(v) == &lam_level, Law::ImplicitMeasurability, || {
                format!(
                    "agent {agent}: {} ∈ Π({}) but Λ({}) = {} ≠ Λ({})_{{{}}} = {}",
                    l.label(v),
                    l.label(w),
                    l.label(v),
                    l.describe(lambda.image(v)),
                    l.label(w),
                    l.key(level),
                    l.describe(&lam_level)
                )
            });
            report.check(lambda.image(v) == pi.image(v), Law::ImplicitMatchesExplicitInsidePossibilitySet, || {
                format!(
                    "agent {agent}: {} ∈ Π({}) but Λ({}) ≠ Π({})",
                    l.label(v),
                    l.label(w),
                    l.label(v),
                    l.label(v)
                )
            });
        }
        report.check(lam_level == *img, Law::Coherence, || {
            format!(
                "agent {agent}: Λ({})_{{{}}} = {} but Π({}) = {}",
                l.label(w),
                l.key(level),
                l.describe(&lam_level),
                l.label(w),
                l.describe(img)
            )
        });
    }
    report
}

/// `Λ_i(ω) := {ω′ ∈ S_ω : Π_i(ω′) = Π_i(ω)}`, kept only if it validates.
pub fn candidate_lambda_from_pi(m: &HmsModel) -> Result<ComplementedModel> {
    let pre = m.validate();
    if !pre.is_empty() {
        return Err(Error::PreconditionFailed(pre));
    }
    let l = m.lattice();
    let mut lambda = Vec::with_capacity(m.pi.len());
    for corr in &m.pi {
        let images = (0..l.state_count())
            .map(|w| {
                let mut cell = l.empty_set();
                for v in l.states_in(l.space_of(w)) {
                    if corr.image(v) == corr.image(w) {
                        cell.insert(v);
                    }
                }
                cell
            })
            .collect();
        lambda.push(Correspondence::new(l, images, "candidate Λ")?);
    }
    let c = ComplementedModel::new(m.clone(), lambda)?;
    let report = c.validate_lambda();
    if report.is_empty() {
        Ok(c)
    } else {
        Err(Error::CandidateInvalid(report))
    }
}

/// Partitional laws of `L_i` and its links with `K_i`, `A_i` and `U_i`, over
/// the event basis. Assumes the structure validates.
pub fn implicit_laws<M: ImplicitKnowledge + ?Sized>(m: &M, cfg: &SuiteConfig) -> Report {
    let l = m.lattice();
    let basis = event_basis(m, cfg.event_cap);
    let fams = families(&basis, cfg);
    let mut report = Report::new();

    for (i, agent) in m.agents().iter().enumerate() {
        let cx = Ctx { l, agent };
        for sp in l.space_indices() {
            let full = l.full_event(sp);
            let lf = m.implicit_knows(i, &full);
            cx.same(&mut report, Law::ImplicitNecessitation, &full, &lf, &full);
        }

        let implicit: Vec<Event> = basis.iter().map(|e| m.implicit_knows(i, e)).collect();
        let implicit_ext: Vec<StateSet> = implicit.iter().map(|e| cx.ext(e)).collect();

        for (n, e) in basis.iter().enumerate() {
            let le = &implicit[n];
            cx.based(&mut report, Law::ImplicitBased, e, le, &m.implicit_set(i, e));
            cx.within(&mut report, Law::ImplicitTruth, e, le, e);
            cx.within(&mut report, Law::ImplicitPositiveIntrospection, e, le, &m.implicit_knows(i, le));
            let nl = m.negate(le);
            cx.within(&mut report, Law::ImplicitNegativeIntrospection, e, &nl, &m.implicit_knows(i, &nl));

            let k = m.knows(i, e);
            let a = m.aware(i, e);
            let mut la = implicit_ext[n].clone();
            la.intersect_with(&cx.ext(&a));
            report.check(cx.ext(&k) == la, Law::ExplicitIsImplicitAndAware, || {
                format!(
                    "agent {agent}, E = {}: K(E) = {} but L(E) ∩ A(E) = {}",
                    cx.show(e),
                    cx.show(&k),
                    l.describe(&la)
                )
            });
            let u = m.negate(&a);
            cx.same(&mut report, Law::UnawarenessImplicitlyKnown, e, &u, &m.implicit_knows(i, &u));
            cx.same(&mut report, Law::AwarenessImplicitlyKnown, e, &a, &m.implicit_knows(i, &a));
            cx.same(&mut report, Law::AwarenessOfImplicitKnowledge, e, &m.aware(i, le), &a);
        }

        for (x, ex) in basis.iter().enumerate() {
            let ext_x = cx.ext(ex);
            for (y, ey) in basis.iter().enumerate() {
                if x != y && ext_x.is_subset(&cx.ext(ey)) {
                    report.check(implicit_ext[x].is_subset(&implicit_ext[y]), Law::ImplicitMonotonicity, || {
                        format!("agent {agent}: {} ⊆ {} but L differs", cx.show(ex), cx.show(ey))
                    });
                }
            }
        }

        for fam in &fams {
            let meet = fam[1..]
                .iter()
                .fold(basis[fam[0]].clone(), |acc, &j| m.conjoin(&acc, &basis[j]));
            let mut l_meet = l.all_states();
            for &j in fam {
                l_meet.intersect_with(&implicit_ext[j]);
            }
            report.check(cx.ext(&m.implicit_knows(i, &meet)) == l_meet, Law::ImplicitConjunction, || {
                let names: Vec<String> = fam.iter().map(|&j| cx.show(&basis[j])).collect();
                format!("agent {agent}, family [{}]", names.join(", "))
            });
        }
    }
    report
}

/// Checks the implicit-knowledge laws. Refuses models that do not validate.
pub fn implicit_property_suite(c: &ComplementedModel, cfg: &SuiteConfig) -> Result<Report> {
    let pre = c.validate();
    if !pre.is_empty() {
        return Err(Error::PreconditionFailed(pre));
    }
    Ok(implicit_laws(c, cfg))
}
