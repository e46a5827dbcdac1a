//! Formula evaluation on every model family.
//!
//! Each model family is an [`Interpretation`]: a Boolean algebra of values
//! (events on lattices, world sets on awareness structures) with modal
//! operators. Evaluation is bottom-up and memoized per subformula.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::atoms::{AtomSet, AtomTable};
use crate::error::ModelError;
use crate::fh::model::{FhModel, WorldSet};
use crate::hms::lattice::Event;
use crate::hms::model::HmsModel;
use crate::hms::ops::{ImplicitKnowledge, UnawarenessStructure};
use crate::implicit::{ComplementedModel, DerivedModel};
use crate::syntax::{Formula, Modality};

/// A model seen as an algebra of formula values.
pub trait Interpretation {
    type Value: Clone + Eq + Hash;

    fn atom_table(&self) -> &AtomTable;
    fn agent_names(&self) -> &[String];
    fn top(&self) -> Self::Value;
    fn atom(&self, p: usize) -> Self::Value;
    fn not(&self, v: &Self::Value) -> Self::Value;
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// The value of a modal formula whose argument has value `v` and atoms
    /// `atoms`.
    fn modal(&self, m: Modality, agent: usize, v: &Self::Value, atoms: AtomSet) -> Result<Self::Value, ModelError>;
    /// Rejects formulas the model cannot interpret at all.
    fn check_language(&self, _atoms: AtomSet) -> Result<(), ModelError> {
        Ok(())
    }
}

/// Memoizing evaluator over one interpretation.
pub struct Evaluator<'a, I: Interpretation + ?Sized> {
    interp: &'a I,
    memo: HashMap<Formula, (I::Value, AtomSet)>,
}

impl<'a, I: Interpretation + ?Sized> Evaluator<'a, I> {
    pub fn new(interp: &'a I) -> Self {
        Evaluator {
            interp,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, f: &Formula) -> Result<I::Value, ModelError> {
        let atoms = f.atom_set(self.interp.atom_table())?;
        self.interp.check_language(atoms)?;
        Ok(self.go(f)?.0)
    }

    fn go(&mut self, f: &Formula) -> Result<(I::Value, AtomSet), ModelError> {
        if let Some(hit) = self.memo.get(f) {
            return Ok(hit.clone());
        }
        let i = self.interp;
        let out = match f {
            Formula::Top => (i.top(), AtomSet::EMPTY),
            Formula::Atom(p) => {
                let idx = i
                    .atom_table()
                    .index_of(p)
                    .ok_or_else(|| ModelError::UnknownAtom(p.clone()))?;
                (i.atom(idx), AtomSet::singleton(idx))
            }
            Formula::Not(g) => {
                let (v, a) = self.go(g)?;
                (i.not(&v), a)
            }
            Formula::And(g, h) => {
                let (v, a) = self.go(g)?;
                let (w, b) = self.go(h)?;
                (i.and(&v, &w), a.union(b))
            }
            Formula::Modal(m, agent, g) => {
                let idx = i
                    .agent_names()
                    .iter()
                    .position(|x| x == agent)
                    .ok_or_else(|| ModelError::UnknownAgent(agent.clone()))?;
                let (v, a) = self.go(g)?;
                (i.modal(*m, idx, &v, a)?, a)
            }
        };
        self.memo.insert(f.clone(), out.clone());
        Ok(out)
    }
}

/// Truth value at a state of a lattice model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TruthValue {
    True,
    False,
    Undefined,
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "True",
            TruthValue::False => "False",
            TruthValue::Undefined => "Undefined",
        })
    }
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }
}

/// A lattice model whose formulas denote events.
pub trait EventModel: UnawarenessStructure {
    /// `L_i(E)`, if the model has implicit knowledge.
    fn implicit_event(&self, agent: usize, e: &Event) -> Option<Event>;
}

impl EventModel for HmsModel {
    fn implicit_event(&self, _agent: usize, _e: &Event) -> Option<Event> {
        None
    }
}

impl EventModel for ComplementedModel {
    fn implicit_event(&self, agent: usize, e: &Event) -> Option<Event> {
        Some(self.implicit_knows(agent, e))
    }
}

impl EventModel for DerivedModel {
    fn implicit_event(&self, agent: usize, e: &Event) -> Option<Event> {
        Some(self.implicit_knows(agent, e))
    }
}

impl<T: EventModel + ?Sized> EventModel for &T {
    fn implicit_event(&self, agent: usize, e: &Event) -> Option<Event> {
        (**self).implicit_event(agent, e)
    }
}

/// Adapts an [`EventModel`] to [`Interpretation`].
pub struct Events<'a, M: ?Sized>(pub &'a M);

impl<M: EventModel + ?Sized> Interpretation for Events<'_, M> {
    type Value = Event;

    fn atom_table(&self) -> &AtomTable {
        self.0.lattice().atoms()
    }
    fn agent_names(&self) -> &[String] {
        self.0.agents()
    }
    fn top(&self) -> Event {
        self.0.lattice().omega()
    }
    fn atom(&self, p: usize) -> Event {
        self.0.valuation(p).clone()
    }
    fn not(&self, v: &Event) -> Event {
        self.0.negate(v)
    }
    fn and(&self, a: &Event, b: &Event) -> Event {
        self.0.conjoin(a, b)
    }
    fn modal(&self, m: Modality, agent: usize, v: &Event, _atoms: AtomSet) -> Result<Event, ModelError> {
        Ok(match m {
            Modality::Explicit => self.0.knows(agent, v),
            Modality::Aware => self.0.aware(agent, v),
            Modality::Implicit => self
                .0
                .implicit_event(agent, v)
                .ok_or_else(|| ModelError::Missing("implicit possibility correspondence (`lambda`)".into()))?,
        })
    }
}

/// `[φ]`.
pub fn extension<M: EventModel + ?Sized>(m: &M, f: &Formula) -> Result<Event, ModelError> {
    Evaluator::new(&Events(m)).eval(f)
}

/// Truth value of `f` at `state`, from the extensions of `f` and `¬f`.
pub fn satisfies<M: EventModel + ?Sized>(m: &M, state: usize, f: &Formula) -> Result<TruthValue, ModelError> {
    let l = m.lattice();
    if state >= l.state_count() {
        return Err(ModelError::UnknownState(state.to_string()));
    }
    let events = Events(m);
    let mut ev = Evaluator::new(&events);
    let pos = ev.eval(f)?;
    let neg = ev.eval(&Formula::not(f.clone()))?;
    Ok(truth_at(m, state, &pos, &neg))
}

pub(crate) fn truth_at<M: UnawarenessStructure + ?Sized>(m: &M, state: usize, pos: &Event, neg: &Event) -> TruthValue {
    let l = m.lattice();
    if l.up_closure(pos).contains(state) {
        TruthValue::True
    } else if l.up_closure(neg).contains(state) {
        TruthValue::False
    } else {
        TruthValue::Undefined
    }
}

/// Truth values of `f` at every state, in state order.
pub fn truth_table<M: EventModel + ?Sized>(m: &M, f: &Formula) -> Result<Vec<TruthValue>, ModelError> {
    let l = m.lattice();
    let events = Events(m);
    let mut ev = Evaluator::new(&events);
    let pos = l.up_closure(&ev.eval(f)?);
    let neg = l.up_closure(&ev.eval(&Formula::not(f.clone()))?);
    Ok((0..l.state_count())
        .map(|s| {
            if pos.contains(s) {
                TruthValue::True
            } else if neg.contains(s) {
                TruthValue::False
            } else {
                TruthValue::Undefined
            }
        })
        .collect())
}

/// Outcome of a definedness-relative validity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    /// A state where the formula is defined and false.
    pub witness: Option<usize>,
}

/// Valid iff true at every state where it is defined.
pub fn valid_in_model<M: EventModel + ?Sized>(m: &M, f: &Formula) -> Result<Validity, ModelError> {
    let table = truth_table(m, f)?;
    let witness = table.iter().position(|t| *t == TruthValue::False);
    Ok(Validity {
        valid: witness.is_none(),
        witness,
    })
}

impl Interpretation for FhModel {
    type Value = WorldSet;

    fn atom_table(&self) -> &AtomTable {
        &self.universe
    }
    fn agent_names(&self) -> &[String] {
        &self.agents
    }
    fn top(&self) -> WorldSet {
        self.all_worlds()
    }
    fn atom(&self, p: usize) -> WorldSet {
        self.valuation[p].clone()
    }
    fn not(&self, v: &WorldSet) -> WorldSet {
        let mut out = self.all_worlds();
        out.difference_with(v);
        out
    }
    fn and(&self, a: &WorldSet, b: &WorldSet) -> WorldSet {
        let mut out = a.clone();
        out.intersect_with(b);
        out
    }
    fn modal(&self, m: Modality, agent: usize, v: &WorldSet, atoms: AtomSet) -> Result<WorldSet, ModelError> {
        let mut implicit = self.empty_set();
        let mut aware = self.empty_set();
        for w in 0..self.world_count() {
            if self.relations[agent][w].is_subset(v) {
                implicit.insert(w);
            }
            if atoms.is_subset(self.awareness[agent][w]) {
                aware.insert(w);
            }
        }
        Ok(match m {
            Modality::Implicit => implicit,
            Modality::Aware => aware,
            Modality::Explicit => {
                implicit.intersect_with(&aware);
                implicit
            }
        })
    }
    fn check_language(&self, atoms: AtomSet) -> Result<(), ModelError> {
        if atoms.is_subset(self.language) {
            Ok(())
        } else {
            Err(ModelError::UndefinedFormula(format!(
                "{:?} not in `{}`",
                self.universe.names_of(atoms.difference(self.language)),
                self.language_key()
            )))
        }
    }
}

/// The worlds where `f` holds.
pub fn fh_extension(k: &FhModel, f: &Formula) -> Result<WorldSet, ModelError> {
    Evaluator::new(k).eval(f)
}

/// `K, w ⊩ f`.
pub fn fh_satisfies(k: &FhModel, w: usize, f: &Formula) -> Result<bool, ModelError> {
    if w >= k.world_count() {
        return Err(ModelError::UnknownState(w.to_string()));
    }
    Ok(fh_extension(k, f)?.contains(w))
}

/// Pairs of interpretations over the same atoms and agents, evaluated in
/// lockstep; used to compare models formula by formula.
impl<A: Interpretation, B: Interpretation> Interpretation for (A, B) {
    type Value = (A::Value, B::Value);

    fn atom_table(&self) -> &AtomTable {
        self.0.atom_table()
    }
    fn agent_names(&self) -> &[String] {
        self.0.agent_names()
    }
    fn top(&self) -> Self::Value {
        (self.0.top(), self.1.top())
    }
    fn atom(&self, p: usize) -> Self::Value {
        (self.0.atom(p), self.1.atom(p))
    }
    fn not(&self, v: &Self::Value) -> Self::Value {
        (self.0.not(&v.0), self.1.not(&v.1))
    }
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (self.0.and(&a.0, &b.0), self.1.and(&a.1, &b.1))
    }
    fn modal(&self, m: Modality, agent: usize, v: &Self::Value, atoms: AtomSet) -> Result<Self::Value, ModelError> {
        Ok((self.0.modal(m, agent, &v.0, atoms)?, self.1.modal(m, agent, &v.1, atoms)?))
    }
    fn check_language(&self, atoms: AtomSet) -> Result<(), ModelError> {
        self.0.check_language(atoms)?;
        self.1.check_language(atoms)
    }
}

/// A family of interpretations over the same atoms and agents, evaluated in
/// lockstep.
pub struct Product<I>(pub Vec<I>);

impl<I: Interpretation> Interpretation for Product<I> {
    type Value = Vec<I::Value>;

    fn atom_table(&self) -> &AtomTable {
        self.0[0].atom_table()
    }
    fn agent_names(&self) -> &[String] {
        self.0[0].agent_names()
    }
    fn top(&self) -> Self::Value {
        self.0.iter().map(|i| i.top()).collect()
    }
    fn atom(&self, p: usize) -> Self::Value {
        self.0.iter().map(|i| i.atom(p)).collect()
    }
    fn not(&self, v: &Self::Value) -> Self::Value {
        self.0.iter().zip(v).map(|(i, x)| i.not(x)).collect()
    }
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        self.0.iter().zip(a.iter().zip(b)).map(|(i, (x, y))| i.and(x, y)).collect()
    }
    fn modal(&self, m: Modality, agent: usize, v: &Self::Value, atoms: AtomSet) -> Result<Self::Value, ModelError> {
        self.0.iter().zip(v).map(|(i, x)| i.modal(m, agent, x, atoms)).collect()
    }
    fn check_language(&self, atoms: AtomSet) -> Result<(), ModelError> {
        self.0.iter().try_for_each(|i| i.check_language(atoms))
    }
}

impl<I: Interpretation + ?Sized> Interpretation for &I {
    type Value = I::Value;

    fn atom_table(&self) -> &AtomTable {
        (**self).atom_table()
    }
    fn agent_names(&self) -> &[String] {
        (**self).agent_names()
    }
    fn top(&self) -> Self::Value {
        (**self).top()
    }
    fn atom(&self, p: usize) -> Self::Value {
        (**self).atom(p)
    }
    fn not(&self, v: &Self::Value) -> Self::Value {
        (**self).not(v)
    }
    fn and(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        (**self).and(a, b)
    }
    fn modal(&self, m: Modality, agent: usize, v: &Self::Value, atoms: AtomSet) -> Result<Self::Value, ModelError> {
        (**self).modal(m, agent, v, atoms)
    }
    fn check_language(&self, atoms: AtomSet) -> Result<(), ModelError> {
        (**self).check_language(atoms)
    }
}
