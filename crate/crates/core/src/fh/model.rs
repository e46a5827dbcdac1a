//! Partitional, propositionally determined awareness structures.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::atoms::{AtomSet, AtomTable};
use crate::error::ModelError;
use crate::report::{Law, Report};

/// A set of worlds.
pub type WorldSet = FixedBitSet;

/// An awareness structure over the language `Φ ⊆ At`.
///
/// Awareness is stored as an atom set per agent and world; a formula is in the
/// awareness set iff its atoms are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FhModel {
    /// The atom universe `At`; the model speaks only about `language`.
    pub universe: AtomTable,
    pub language: AtomSet,
    pub agents: Vec<String>,
    pub worlds: Vec<String>,
    /// `relations[i][w]` is the set of `t` with `(w, t) ∈ R_i`.
    pub relations: Vec<Vec<WorldSet>>,
    pub awareness: Vec<Vec<AtomSet>>,
    /// `V(p)` indexed by universe atom; empty outside the language.
    pub valuation: Vec<WorldSet>,
}

impl FhModel {
    /// Checks shapes and names; laws are left to [`validate`](Self::validate).
    pub fn new(
        universe: AtomTable,
        language: AtomSet,
        agents: Vec<String>,
        worlds: Vec<String>,
        relations: Vec<Vec<WorldSet>>,
        awareness: Vec<Vec<AtomSet>>,
        valuation: Vec<WorldSet>,
    ) -> Result<Self, ModelError> {
        if agents.is_empty() {
            return Err(ModelError::NoAgents);
        }
        if worlds.is_empty() {
            return Err(ModelError::Missing("at least one world".into()));
        }
        let mut seen = HashMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if w.is_empty() || w.contains(':') {
                return Err(ModelError::BadName(w.clone()));
            }
            if seen.insert(w.as_str(), i).is_some() {
                return Err(ModelError::Duplicate(format!("world `{w}`")));
            }
        }
        let mut names = agents.clone();
        names.sort();
        names.dedup();
        if names.len() != agents.len() {
            return Err(ModelError::Duplicate("agent".into()));
        }
        if !language.is_subset(universe.full()) {
            return Err(ModelError::Malformed("language is not a subset of the atom universe".into()));
        }
        let n = worlds.len();
        let shaped = relations.len() == agents.len()
            && awareness.len() == agents.len()
            && relations.iter().all(|r| r.len() == n && r.iter().all(|s| s.len() == n))
            && awareness.iter().all(|a| a.len() == n)
            && valuation.len() == universe.len()
            && valuation.iter().all(|v| v.len() == n);
        if !shaped {
            return Err(ModelError::Malformed("relation, awareness or valuation tables have the wrong shape".into()));
        }
        Ok(FhModel {
            universe,
            language,
            agents,
            worlds,
            relations,
            awareness,
            valuation,
        })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn empty_set(&self) -> WorldSet {
        WorldSet::with_capacity(self.worlds.len())
    }

    pub fn all_worlds(&self) -> WorldSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn language_key(&self) -> String {
        self.universe.key(self.language)
    }

    pub fn describe(&self, set: &WorldSet) -> String {
        let names: Vec<&str> = set.ones().map(|w| self.worlds[w].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Equivalence of every `R_i`, awareness constant on cells and inside the
    /// language, valuation inside the language.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.world_count();
        for (i, agent) in self.agents.iter().enumerate() {
            let r = &self.relations[i];
            for w in 0..n {
                report.check(r[w].contains(w), Law::RelationReflexive, || {
                    format!("agent {agent}: ({0}, {0}) ∉ R", self.worlds[w])
                });
                for t in r[w].ones() {
                    report.check(r[t].is_subset(&r[w]), Law::RelationTransitive, || {
                        format!(
                            "agent {agent}: ({}, {}) ∈ R but R({}) ⊄ R({})",
                            self.worlds[w], self.worlds[t], self.worlds[t], self.worlds[w]
                        )
                    });
                    report.check(r[w].is_subset(&r[t]), Law::RelationEuclidean, || {
                        format!(
                            "agent {agent}: ({}, {}) ∈ R but R({}) ⊄ R({})",
                            self.worlds[w], self.worlds[t], self.worlds[w], self.worlds[t]
                        )
                    });
                    report.check(self.awareness[i][t] == self.awareness[i][w], Law::AwarenessConstantOnCells, || {
                        format!(
                            "agent {agent}: ({}, {}) ∈ R but awareness {:?} vs {:?}",
                            self.worlds[w],
                            self.worlds[t],
                            self.universe.names_of(self.awareness[i][w]),
                            self.universe.names_of(self.awareness[i][t])
                        )
                    });
                }
                let aw = self.awareness[i][w];
                report.check(aw.is_subset(self.language), Law::AwarenessOutsideLanguage, || {
                    format!(
                        "agent {agent} at {}: aware of {:?} outside `{}`",
                        self.worlds[w],
                        self.universe.names_of(aw.difference(self.language)),
                        self.language_key()
                    )
                });
            }
        }
        for (p, v) in self.valuation.iter().enumerate() {
            report.check(self.language.contains(p) || v.is_clear(), Law::ValuationOutsideLanguage, || {
                format!("V({}) is nonempty but the atom is outside `{}`", self.universe.name(p), self.language_key())
            });
        }
        report
    }

    /// The same structure with the language cut down to `psi`: valuation
    /// restricted and awareness intersected.
    pub fn restrict(&self, psi: AtomSet) -> FhModel {
        let mut out = self.clone();
        out.language = self.language.intersection(psi);
        for row in &mut out.awareness {
            for a in row.iter_mut() {
                *a = a.intersection(out.language);
            }
        }
        for (p, v) in out.valuation.iter_mut().enumerate() {
            if !out.language.contains(p) {
                v.clear();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_worlds() -> FhModel {
        let universe = AtomTable::new(["p"]).unwrap();
        let mut all = WorldSet::with_capacity(2);
        all.insert_range(..);
        let mut v = WorldSet::with_capacity(2);
        v.insert(0);
        FhModel::new(
            universe.clone(),
            universe.full(),
            vec!["1".into()],
            vec!["w0".into(), "w1".into()],
            vec![vec![all.clone(), all]],
            vec![vec![universe.full(), universe.full()]],
            vec![v],
        )
        .unwrap()
    }

    #[test]
    fn a_full_relation_validates() {
        assert!(two_worlds().validate().is_empty());
    }

    #[test]
    fn awareness_differing_inside_a_cell_is_reported() {
        let mut m = two_worlds();
        m.awareness[0][1] = AtomSet::EMPTY;
        assert!(m.validate().has(Law::AwarenessConstantOnCells));
    }

    #[test]
    fn asymmetric_relation_is_reported() {
        let mut m = two_worlds();
        m.relations[0][1].set(0, false);
        let r = m.validate();
        assert!(r.has(Law::RelationEuclidean) || r.has(Law::RelationTransitive));
    }

    #[test]
    fn restriction_drops_valuation_and_awareness() {
        let m = two_worlds().restrict(AtomSet::EMPTY);
        assert!(m.valuation[0].is_clear());
        assert_eq!(m.awareness[0][0], AtomSet::EMPTY);
        assert!(m.validate().is_empty());
    }
}
