//! Unawareness structures with an explicit possibility correspondence.

use crate::atoms::AtomSet;
use crate::error::ModelError;
use crate::hms::lattice::{Event, Lattice, StateSet};
use crate::hms::ops::UnawarenessStructure;
use crate::report::{Law, Report};

/// A per-state map to nonempty sets of states, for one agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    images: Vec<StateSet>,
}

impl Correspondence {
    pub fn new(lattice: &Lattice, images: Vec<StateSet>, what: &str) -> Result<Self, ModelError> {
        if images.len() != lattice.state_count() {
            return Err(ModelError::IncompleteMap(what.to_string()));
        }
        let mut images = images;
        for (s, img) in images.iter_mut().enumerate() {
            img.grow(lattice.state_count());
            if img.is_clear() {
                return Err(ModelError::EmptyImage(format!("{what} at {}", lattice.label(s))));
            }
        }
        Ok(Correspondence { images })
    }

    pub fn image(&self, state: usize) -> &StateSet {
        &self.images[state]
    }

    pub fn images(&self) -> &[StateSet] {
        &self.images
    }
}

/// The ingredients shared by every model on a lattice of spaces.
#[derive(Clone, Debug)]
pub struct Frame {
    pub lattice: Lattice,
    pub agents: Vec<String>,
    /// `v(p)` indexed by atom.
    pub valuation: Vec<Event>,
}

impl Frame {
    pub fn new(lattice: Lattice, agents: Vec<String>, valuation: Vec<Event>) -> Result<Self, ModelError> {
        if agents.is_empty() {
            return Err(ModelError::NoAgents);
        }
        let mut seen = agents.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != agents.len() {
            return Err(ModelError::Duplicate("agent".into()));
        }
        for a in &agents {
            if a.is_empty() || !a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ModelError::BadName(a.clone()));
            }
        }
        if valuation.len() != lattice.atoms().len() {
            return Err(ModelError::Missing("valuation entry for every atom".into()));
        }
        Ok(Frame {
            lattice,
            agents,
            valuation,
        })
    }

    pub fn agent_index(&self, name: &str) -> Result<usize, ModelError> {
        self.agents
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| ModelError::UnknownAgent(name.to_string()))
    }

    /// Each `v(p)` must be based at `S_{p}` (or below it when `relaxed`).
    pub fn validate_valuation(&self, relaxed: bool) -> Report {
        let mut report = Report::new();
        for (p, e) in self.valuation.iter().enumerate() {
            let own = AtomSet::singleton(p);
            let ok = if relaxed {
                e.space().is_subset(own)
            } else {
                e.space() == own
            };
            report.check(ok, Law::ValuationBaseSpace, || {
                format!(
                    "v({}) is based at `{}`",
                    self.lattice.atoms().name(p),
                    self.lattice.key(e.space())
                )
            });
        }
        report
    }
}

/// An unawareness structure: lattice, agents, `Π_i` and valuation.
#[derive(Clone, Debug)]
pub struct HmsModel {
    pub frame: Frame,
    pub pi: Vec<Correspondence>,
}

impl HmsModel {
    pub fn new(frame: Frame, pi: Vec<Correspondence>) -> Result<Self, ModelError> {
        if pi.len() != frame.agents.len() {
            return Err(ModelError::Missing("possibility correspondence for every agent".into()));
        }
        Ok(HmsModel { frame, pi })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.frame.lattice
    }

    /// All structural laws: projections, Assumption-1 properties of every
    /// `Π_i`, and the valuation convention.
    pub fn validate(&self) -> Report {
        self.validate_with(false)
    }

    pub fn validate_with(&self, relaxed_valuation: bool) -> Report {
        let mut report = self.lattice().validate();
        for (i, corr) in self.pi.iter().enumerate() {
            report.extend(validate_possibility(self.lattice(), &self.frame.agents[i], corr));
        }
        report.extend(self.frame.validate_valuation(relaxed_valuation));
        report
    }
}

impl UnawarenessStructure for HmsModel {
    fn lattice(&self) -> &Lattice {
        &self.frame.lattice
    }

    fn agents(&self) -> &[String] {
        &self.frame.agents
    }

    fn valuation(&self, atom: usize) -> &Event {
        &self.frame.valuation[atom]
    }

    fn possibility(&self, agent: usize, state: usize) -> &StateSet {
        self.pi[agent].image(state)
    }
}

/// Confinement, Generalized Reflexivity, Stationarity, Projections Preserve
/// Ignorance and Projections Preserve Knowledge for one agent.
pub fn validate_possibility(l: &Lattice, agent: &str, corr: &Correspondence) -> Report {
    let mut report = Report::new();
    let spaces: Vec<Option<AtomSet>> = corr.images().iter().map(|img| l.set_space(img)).collect();
    let ups: Vec<StateSet> = corr
        .images()
        .iter()
        .zip(&spaces)
        .map(|(img, sp)| sp.map(|sp| l.up_of(sp, img)).unwrap_or_else(|| l.empty_set()))
        .collect();

    for w in 0..l.state_count() {
        let own = l.space_of(w);
        let img = corr.image(w);
        match spaces[w] {
            None => report.push(
                Law::Confinement,
                format!("agent {agent} at {}: image {} straddles spaces", l.label(w), l.describe(img)),
            ),
            Some(sp) => report.check(sp.is_subset(own), Law::Confinement, || {
                format!(
                    "agent {agent} at {}: image lies in `{}`, not below `{}`",
                    l.label(w),
                    l.key(sp),
                    l.key(own)
                )
            }),
        }
        let confined = spaces[w].is_some_and(|sp| sp.is_subset(own));

        report.check(ups[w].contains(w), Law::GeneralizedReflexivity, || {
            format!("agent {agent}: {} not in up-closure of {}", l.label(w), l.describe(img))
        });

        for v in img.ones() {
            report.check(corr.image(v) == img, Law::Stationarity, || {
                format!(
                    "agent {agent}: {} in Π({}) but Π differs",
                    l.label(v),
                    l.label(w)
                )
            });
        }

        for psi in own.subsets() {
            let wp = l.project(w, psi).expect("below own space");
            report.check(ups[w].is_subset(&ups[wp]), Law::ProjectionsPreserveIgnorance, || {
                format!("agent {agent}: Π↑({}) ⊄ Π↑({})", l.label(w), l.label(wp))
            });
        }

        if confined {
            let sp = spaces[w].expect("confined");
            for upsilon in sp.subsets() {
                let projected = l.project_set(img, upsilon);
                let wu = l.project(w, upsilon).expect("below");
                report.check(&projected == corr.image(wu), Law::ProjectionsPreserveKnowledge, || {
                    format!(
                        "agent {agent}: Π({})_{{{}}} = {} but Π({}) = {}",
                        l.label(w),
                        l.key(upsilon),
                        l.describe(&projected),
                        l.label(wu),
                        l.describe(corr.image(wu))
                    )
                });
            }
        }
    }
    report
}
