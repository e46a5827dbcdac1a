//! The lattice of state spaces, its projections, and events.
//!
//! States of all spaces share one global index range so that sets of states
//! anywhere in the lattice are plain bit sets. An [`Event`] is stored by its
//! base space and base; its extension (the up-closure of the base) is
//! computed on demand.

use std::collections::HashMap;
use std::ops::Range;

use fixedbitset::FixedBitSet;

use crate::atoms::{AtomSet, AtomTable};
use crate::error::ModelError;
use crate::report::{Law, Report};

/// A set of states, indexed globally across all spaces.
pub type StateSet = FixedBitSet;

const NO_PROJ: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Space {
    start: usize,
    names: Vec<String>,
    lookup: HashMap<String, usize>,
}

/// Spaces `S_Φ` for every `Φ ⊆ At` with their projections.
#[derive(Clone, Debug)]
pub struct Lattice {
    atoms: AtomTable,
    spaces: Vec<Space>,
    state_space: Vec<AtomSet>,
    /// `proj[ω * 2^n + Ψ]` is the global index of `ω_Ψ`, or `NO_PROJ`.
    proj: Vec<u32>,
    /// Covering maps as given, keyed by `(Φ, removed atom)`.
    covers: HashMap<(AtomSet, usize), Vec<usize>>,
}

/// An event: a base space `S_Φ` and a base `D ⊆ S_Φ`, denoting `D↑`.
///
/// Equality is on `(base space, base)`, so the vacuous events of different
/// spaces are distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    space: AtomSet,
    base: StateSet,
}

impl Event {
    pub fn space(&self) -> AtomSet {
        self.space
    }

    pub fn base(&self) -> &StateSet {
        &self.base
    }

    pub fn is_vacuous(&self) -> bool {
        self.base.is_clear()
    }
}

impl Lattice {
    /// Builds the lattice from per-space state names (indexed by
    /// `AtomSet::index`) and covering projections `(Φ, x) ↦ r^Φ_{Φ∖{x}}`,
    /// given as local indices into the target space.
    pub fn new(
        atoms: AtomTable,
        space_states: Vec<Vec<String>>,
        covers: HashMap<(AtomSet, usize), Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let n_spaces = 1usize << atoms.len();
        if space_states.len() != n_spaces {
            return Err(ModelError::Missing(format!(
                "state spaces: expected {n_spaces}, got {}",
                space_states.len()
            )));
        }
        let mut spaces = Vec::with_capacity(n_spaces);
        let mut state_space = Vec::new();
        for (bits, names) in space_states.into_iter().enumerate() {
            let set = AtomSet::from_bits(bits as u32);
            if names.is_empty() {
                return Err(ModelError::EmptySpace(atoms.key(set)));
            }
            let mut lookup = HashMap::with_capacity(names.len());
            for (i, name) in names.iter().enumerate() {
                if name.is_empty() || name.contains(':') {
                    return Err(ModelError::BadName(name.clone()));
                }
                if lookup.insert(name.clone(), i).is_some() {
                    return Err(ModelError::Duplicate(format!(
                        "state `{name}` in space `{}`",
                        atoms.key(set)
                    )));
                }
            }
            spaces.push(Space {
                start: state_space.len(),
                names,
                lookup,
            });
            state_space.extend(std::iter::repeat_n(set, spaces[bits].names.len()));
        }

        for (&(from, atom), map) in &covers {
            if from.index() >= n_spaces || !from.contains(atom) {
                return Err(ModelError::NotCovering(format!(
                    "{}->{}",
                    atoms.key(from),
                    atoms.key(from.remove(atom))
                )));
            }
            let target = &spaces[from.remove(atom).index()];
            if map.len() != spaces[from.index()].names.len()
                || map.iter().any(|&j| j >= target.names.len())
            {
                return Err(ModelError::IncompleteMap(format!(
                    "{}->{}",
                    atoms.key(from),
                    atoms.key(from.remove(atom))
                )));
            }
        }
        for bits in 0..n_spaces {
            let from = AtomSet::from_bits(bits as u32);
            for atom in from.iter() {
                if !covers.contains_key(&(from, atom)) {
                    return Err(ModelError::Missing(format!(
                        "projection {}->{}",
                        atoms.key(from),
                        atoms.key(from.remove(atom))
                    )));
                }
            }
        }

        let total = state_space.len();
        let mut proj = vec![NO_PROJ; total * n_spaces];
        // Fill spaces bottom-up so lower tables exist when composing.
        let mut order: Vec<usize> = (0..n_spaces).collect();
        order.sort_by_key(|&b| (b as u32).count_ones());
        for bits in order {
            let from = AtomSet::from_bits(bits as u32);
            let sp = &spaces[bits];
            for (local, _) in sp.names.iter().enumerate() {
                let g = sp.start + local;
                for sub in from.subsets() {
                    let value = if sub == from {
                        g
                    } else {
                        let x = from.difference(sub).iter().next().expect("nonempty");
                        let lower = from.remove(x);
                        let step = spaces[lower.index()].start + covers[&(from, x)][local];
                        proj[step * n_spaces + sub.index()] as usize
                    };
                    proj[g * n_spaces + sub.index()] = value as u32;
                }
            }
        }

        Ok(Lattice {
            atoms,
            spaces,
            state_space,
            proj,
            covers,
        })
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn top(&self) -> AtomSet {
        self.atoms.full()
    }

    pub fn space_count(&self) -> usize {
        self.spaces.len()
    }

    /// All space indices, smallest (`S_∅`) first.
    pub fn space_indices(&self) -> impl Iterator<Item = AtomSet> {
        self.top().subsets()
    }

    pub fn state_count(&self) -> usize {
        self.state_space.len()
    }

    pub fn space_of(&self, state: usize) -> AtomSet {
        self.state_space[state]
    }

    pub fn states_in(&self, space: AtomSet) -> Range<usize> {
        let sp = &self.spaces[space.index()];
        sp.start..sp.start + sp.names.len()
    }

    pub fn space_size(&self, space: AtomSet) -> usize {
        self.spaces[space.index()].names.len()
    }

    pub fn local_index(&self, state: usize) -> usize {
        state - self.spaces[self.space_of(state).index()].start
    }

    pub fn state_name(&self, state: usize) -> &str {
        let sp = &self.spaces[self.space_of(state).index()];
        &sp.names[state - sp.start]
    }

    pub fn space_names(&self, space: AtomSet) -> &[String] {
        &self.spaces[space.index()].names
    }

    /// `key:id` label of a state.
    pub fn label(&self, state: usize) -> String {
        format!("{}:{}", self.atoms.key(self.space_of(state)), self.state_name(state))
    }

    pub fn key(&self, space: AtomSet) -> String {
        self.atoms.key(space)
    }

    pub fn find_state(&self, space: AtomSet, name: &str) -> Option<usize> {
        let sp = self.spaces.get(space.index())?;
        sp.lookup.get(name).map(|&i| sp.start + i)
    }

    /// Resolves `key:id`; the key may be in either accepted key form.
    pub fn parse_state(&self, text: &str) -> Result<usize, ModelError> {
        let (key, id) = text
            .split_once(':')
            .ok_or_else(|| ModelError::UnknownState(text.to_string()))?;
        let space = self.atoms.parse_key(key)?;
        self.find_state(space, id.trim())
            .ok_or_else(|| ModelError::UnknownState(text.to_string()))
    }

    pub fn cover_map(&self, from: AtomSet, atom: usize) -> Option<&[usize]> {
        self.covers.get(&(from, atom)).map(Vec::as_slice)
    }

    /// `ω_Ψ`, or `None` when `Ψ` is not below the space of `ω`.
    pub fn project(&self, state: usize, to: AtomSet) -> Option<usize> {
        if to.index() >= self.spaces.len() {
            return None;
        }
        let v = self.proj[state * self.spaces.len() + to.index()];
        (v != NO_PROJ).then_some(v as usize)
    }

    pub fn project_checked(&self, state: usize, to: AtomSet) -> Result<usize, ModelError> {
        self.project(state, to).ok_or_else(|| ModelError::NotComparable {
            state: self.label(state),
            space: self.atoms.key(to),
        })
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::with_capacity(self.state_count())
    }

    pub fn space_set(&self, space: AtomSet) -> StateSet {
        let mut s = self.empty_set();
        s.insert_range(self.states_in(space));
        s
    }

    pub fn all_states(&self) -> StateSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// `D_Ψ`: the projection of a set of states to `S_Ψ`. States whose space
    /// is not above `Ψ` are skipped.
    pub fn project_set(&self, set: &StateSet, to: AtomSet) -> StateSet {
        let mut out = self.empty_set();
        for s in set.ones() {
            if let Some(t) = self.project(s, to) {
                out.insert(t);
            }
        }
        out
    }

    /// The space containing every member of `set`; `None` when the set is
    /// empty or straddles spaces.
    pub fn set_space(&self, set: &StateSet) -> Option<AtomSet> {
        let mut it = set.ones();
        let first = self.space_of(it.next()?);
        it.all(|s| self.space_of(s) == first).then_some(first)
    }

    /// `D↑` for `D ⊆ S_Φ`.
    pub fn up_of(&self, space: AtomSet, base: &StateSet) -> StateSet {
        let mut out = self.empty_set();
        if base.is_clear() {
            return out;
        }
        let comp = self.top().difference(space);
        for extra in comp.subsets() {
            let above = space.union(extra);
            for s in self.states_in(above) {
                if base.contains(self.project(s, space).expect("above")) {
                    out.insert(s);
                }
            }
        }
        out
    }

    pub fn up_closure(&self, e: &Event) -> StateSet {
        self.up_of(e.space, &e.base)
    }

    /// Builds a well-formed event, rejecting bases outside the space.
    pub fn event(&self, space: AtomSet, base: StateSet) -> Result<Event, ModelError> {
        let mut base = base;
        base.grow(self.state_count());
        if base.len() != self.state_count() {
            return Err(ModelError::Malformed("event base has the wrong width".into()));
        }
        if let Some(s) = base.ones().find(|&s| self.space_of(s) != space) {
            return Err(ModelError::Malformed(format!(
                "state {} is not in base space `{}`",
                self.label(s),
                self.key(space)
            )));
        }
        Ok(Event { space, base })
    }

    /// The event with base space `Φ` and base `set ∩ S_Φ`.
    pub fn event_restricting(&self, space: AtomSet, set: &StateSet) -> Event {
        let mut base = self.space_set(space);
        base.intersect_with(set);
        Event { space, base }
    }

    /// `S_Φ↑`.
    pub fn full_event(&self, space: AtomSet) -> Event {
        Event {
            space,
            base: self.space_set(space),
        }
    }

    /// `∅^{S_Φ}`.
    pub fn vacuous(&self, space: AtomSet) -> Event {
        Event {
            space,
            base: self.empty_set(),
        }
    }

    /// `Ω`, based at the meet space.
    pub fn omega(&self) -> Event {
        self.full_event(AtomSet::EMPTY)
    }

    /// Whether `set` equals `(set ∩ S_Φ)↑`.
    pub fn is_based_at(&self, space: AtomSet, set: &StateSet) -> bool {
        let e = self.event_restricting(space, set);
        self.up_closure(&e) == *set
    }

    /// Wraps the extension of an operator as an `S(E)`-based event, falling
    /// back to the vacuous event of that space when the extension is empty.
    pub fn based_or_vacuous(&self, space: AtomSet, set: &StateSet) -> Event {
        if set.is_clear() {
            self.vacuous(space)
        } else {
            self.event_restricting(space, set)
        }
    }

    /// `¬E`: complement of the base within the base space.
    pub fn negate(&self, e: &Event) -> Event {
        let mut base = self.space_set(e.space);
        base.difference_with(&e.base);
        Event {
            space: e.space,
            base,
        }
    }

    /// `E ∩ F`, based at the join of the two base spaces.
    pub fn conjoin(&self, a: &Event, b: &Event) -> Event {
        let join = a.space.union(b.space);
        let mut base = self.empty_set();
        for s in self.states_in(join) {
            let pa = self.project(s, a.space).expect("join above");
            let pb = self.project(s, b.space).expect("join above");
            if a.base.contains(pa) && b.base.contains(pb) {
                base.insert(s);
            }
        }
        Event { space: join, base }
    }

    /// `E ∪ F` via De Morgan.
    pub fn disjoin(&self, a: &Event, b: &Event) -> Event {
        self.negate(&self.conjoin(&self.negate(a), &self.negate(b)))
    }

    /// Whether `E↑ ⊆ F↑`.
    pub fn event_subset(&self, a: &Event, b: &Event) -> bool {
        self.up_closure(a).is_subset(&self.up_closure(b))
    }

    /// Projection laws: identity, surjectivity and composition.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.spaces.len();
        for from in self.space_indices() {
            for s in self.states_in(from) {
                report.check(self.project(s, from) == Some(s), Law::ProjectionIdentity, || {
                    format!("state {}", self.label(s))
                });
            }
            for to in from.subsets() {
                let mut hit = self.empty_set();
                for s in self.states_in(from) {
                    hit.insert(self.proj[s * n + to.index()] as usize);
                }
                for t in self.states_in(to) {
                    report.check(hit.contains(t), Law::ProjectionSurjective, || {
                        format!(
                            "r^{{{}}}_{{{}}} misses {}",
                            self.key(from),
                            self.key(to),
                            self.label(t)
                        )
                    });
                }
                for mid in from.subsets().filter(|m| to.is_subset(*m)) {
                    for s in self.states_in(from) {
                        let direct = self.project(s, to);
                        let via = self.project(s, mid).and_then(|m| self.project(m, to));
                        report.check(direct == via, Law::ProjectionComposition, || {
                            format!(
                                "state {} via {{{}}} to {{{}}}",
                                self.label(s),
                                self.key(mid),
                                self.key(to)
                            )
                        });
                    }
                }
            }
        }
        // Covering maps must agree with the composed table; a non-commuting
        // diagram shows up as a mismatch for some later-removed atom.
        for (&(from, atom), map) in &self.covers {
            let to = from.remove(atom);
            for (local, &target) in map.iter().enumerate() {
                let s = self.spaces[from.index()].start + local;
                let expected = self.spaces[to.index()].start + target;
                report.check(
                    self.project(s, to) == Some(expected),
                    Law::ProjectionComposition,
                    || {
                        format!(
                            "covering map {}->{} disagrees at {}",
                            self.key(from),
                            self.key(to),
                            self.label(s)
                        )
                    },
                );
            }
        }
        report
    }

    /// Describes a set of states as `{key:id, ...}`.
    pub fn describe(&self, set: &StateSet) -> String {
        let labels: Vec<String> = set.ones().map(|s| self.label(s)).collect();
        format!("{{{}}}", labels.join(", "))
    }

    pub fn describe_event(&self, e: &Event) -> String {
        let names: Vec<&str> = e.base.ones().map(|s| self.state_name(s)).collect();
        format!("[{}]{{{}}}", self.key(e.space), names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `At = {p}`: `S_p = {p, ~p}`, `S_∅ = {*}`.
    fn two_level() -> Lattice {
        let atoms = AtomTable::new(["p"]).unwrap();
        let spaces = vec![vec!["*".to_string()], vec!["p".into(), "~p".into()]];
        let covers = HashMap::from([((AtomSet::singleton(0), 0), vec![0, 0])]);
        Lattice::new(atoms, spaces, covers).unwrap()
    }

    #[test]
    fn up_closure_and_negation() {
        let l = two_level();
        let p = AtomSet::singleton(0);
        let mut base = l.empty_set();
        base.insert(l.find_state(p, "p").unwrap());
        let e = l.event(p, base).unwrap();
        assert_eq!(l.up_closure(&e).count_ones(..), 1);
        let ne = l.negate(&e);
        assert_eq!(l.describe_event(&ne), "[p]{~p}");
        let omega = l.up_closure(&l.omega());
        assert_eq!(omega.count_ones(..), 3);
        assert!(l.validate().is_empty());
    }

    #[test]
    fn missing_cover_is_an_input_error() {
        let atoms = AtomTable::new(["p"]).unwrap();
        let spaces = vec![vec!["*".to_string()], vec!["p".into()]];
        let err = Lattice::new(atoms, spaces, HashMap::new()).unwrap_err();
        assert!(matches!(err, ModelError::Missing(_)));
    }

    #[test]
    fn non_surjective_projection_is_reported() {
        let atoms = AtomTable::new(["p"]).unwrap();
        let spaces = vec![vec!["a".to_string(), "b".into()], vec!["p".into()]];
        let covers = HashMap::from([((AtomSet::singleton(0), 0), vec![0])]);
        let l = Lattice::new(atoms, spaces, covers).unwrap();
        assert!(l.validate().has(Law::ProjectionSurjective));
    }

    #[test]
    fn project_rejects_incomparable_spaces() {
        let l = two_level();
        let star = l.find_state(AtomSet::EMPTY, "*").unwrap();
        assert!(l.project(star, AtomSet::singleton(0)).is_none());
        assert!(matches!(
            l.project_checked(star, AtomSet::singleton(0)),
            Err(ModelError::NotComparable { .. })
        ));
    }
}
