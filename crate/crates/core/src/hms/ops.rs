//! Knowledge and awareness operators on events.
//!
//! Each operator is computed as an extension (a plain set of states) and then
//! wrapped as an `S(E)`-based event; when the extension is empty the result is
//! the vacuous event `∅^{S(E)}`.

use crate::atoms::AtomSet;
use crate::hms::lattice::{Event, Lattice, StateSet};

/// `{ω : corr(ω) ⊆ E}`.
pub fn knowledge_set<'a>(
    l: &Lattice,
    corr: impl Fn(usize) -> &'a StateSet,
    e: &Event,
) -> StateSet {
    let up = l.up_closure(e);
    let mut out = l.empty_set();
    for w in 0..l.state_count() {
        if corr(w).is_subset(&up) {
            out.insert(w);
        }
    }
    out
}

/// `{ω : level(ω) ⪰ S(E)}` where `level` gives the awareness space at `ω`.
pub fn awareness_set(l: &Lattice, level: impl Fn(usize) -> Option<AtomSet>, e: &Event) -> StateSet {
    let mut out = l.empty_set();
    for w in 0..l.state_count() {
        if level(w).is_some_and(|sp| e.space().is_subset(sp)) {
            out.insert(w);
        }
    }
    out
}

/// Anything with a lattice, a valuation and explicit knowledge/awareness
/// operators.
///
/// The provided methods implement the textbook operators from
/// [`possibility`](Self::possibility); implementors may override the awareness
/// operator when awareness is primitive.
pub trait UnawarenessStructure {
    fn lattice(&self) -> &Lattice;
    fn agents(&self) -> &[String];
    fn valuation(&self, atom: usize) -> &Event;
    /// `Π_i(ω)`.
    fn possibility(&self, agent: usize, state: usize) -> &StateSet;

    /// `S_{Π_i(ω)}`, or `None` if the possibility set straddles spaces.
    fn possibility_space(&self, agent: usize, state: usize) -> Option<AtomSet> {
        self.lattice().set_space(self.possibility(agent, state))
    }

    fn knows_set(&self, agent: usize, e: &Event) -> StateSet {
        knowledge_set(self.lattice(), |w| self.possibility(agent, w), e)
    }

    fn aware_set(&self, agent: usize, e: &Event) -> StateSet {
        awareness_set(self.lattice(), |w| self.possibility_space(agent, w), e)
    }

    /// `K_i(E)`.
    fn knows(&self, agent: usize, e: &Event) -> Event {
        self.lattice().based_or_vacuous(e.space(), &self.knows_set(agent, e))
    }

    /// `A_i(E)`.
    fn aware(&self, agent: usize, e: &Event) -> Event {
        self.lattice().based_or_vacuous(e.space(), &self.aware_set(agent, e))
    }

    /// `U_i(E) = ¬A_i(E)`.
    fn unaware(&self, agent: usize, e: &Event) -> Event {
        self.negate(&self.aware(agent, e))
    }

    fn negate(&self, e: &Event) -> Event {
        self.lattice().negate(e)
    }

    fn conjoin(&self, a: &Event, b: &Event) -> Event {
        self.lattice().conjoin(a, b)
    }

    fn disjoin(&self, a: &Event, b: &Event) -> Event {
        self.negate(&self.conjoin(&self.negate(a), &self.negate(b)))
    }
}

/// Structures that also carry an implicit possibility correspondence.
pub trait ImplicitKnowledge: UnawarenessStructure {
    /// `Λ_i(ω)`.
    fn implicit_possibility(&self, agent: usize, state: usize) -> &StateSet;

    fn implicit_set(&self, agent: usize, e: &Event) -> StateSet {
        knowledge_set(self.lattice(), |w| self.implicit_possibility(agent, w), e)
    }

    /// `L_i(E)`.
    fn implicit_knows(&self, agent: usize, e: &Event) -> Event {
        self.lattice().based_or_vacuous(e.space(), &self.implicit_set(agent, e))
    }
}

impl<T: UnawarenessStructure + ?Sized> UnawarenessStructure for &T {
    fn lattice(&self) -> &Lattice {
        (**self).lattice()
    }
    fn agents(&self) -> &[String] {
        (**self).agents()
    }
    fn valuation(&self, atom: usize) -> &Event {
        (**self).valuation(atom)
    }
    fn possibility(&self, agent: usize, state: usize) -> &StateSet {
        (**self).possibility(agent, state)
    }
    fn possibility_space(&self, agent: usize, state: usize) -> Option<AtomSet> {
        (**self).possibility_space(agent, state)
    }
    fn knows_set(&self, agent: usize, e: &Event) -> StateSet {
        (**self).knows_set(agent, e)
    }
    fn aware_set(&self, agent: usize, e: &Event) -> StateSet {
        (**self).aware_set(agent, e)
    }
    fn knows(&self, agent: usize, e: &Event) -> Event {
        (**self).knows(agent, e)
    }
    fn aware(&self, agent: usize, e: &Event) -> Event {
        (**self).aware(agent, e)
    }
    fn unaware(&self, agent: usize, e: &Event) -> Event {
        (**self).unaware(agent, e)
    }
    fn negate(&self, e: &Event) -> Event {
        (**self).negate(e)
    }
    fn conjoin(&self, a: &Event, b: &Event) -> Event {
        (**self).conjoin(a, b)
    }
    fn disjoin(&self, a: &Event, b: &Event) -> Event {
        (**self).disjoin(a, b)
    }
}

impl<T: ImplicitKnowledge + ?Sized> ImplicitKnowledge for &T {
    fn implicit_possibility(&self, agent: usize, state: usize) -> &StateSet {
        (**self).implicit_possibility(agent, state)
    }
    fn implicit_set(&self, agent: usize, e: &Event) -> StateSet {
        (**self).implicit_set(agent, e)
    }
    fn implicit_knows(&self, agent: usize, e: &Event) -> Event {
        (**self).implicit_knows(agent, e)
    }
}
