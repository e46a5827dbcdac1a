//! Exhaustive checks of the algebraic laws of explicit knowledge and
//! awareness over a finite basis of events.

use std::collections::HashSet;

use crate::atoms::AtomSet;
use crate::hms::lattice::{Event, Lattice, StateSet};
use crate::hms::ops::UnawarenessStructure;
use crate::report::{Law, Report};

/// Bounds on the event basis and on the conjunction families checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Maximum number of events in the basis.
    pub event_cap: usize,
    /// Largest family size for the conjunction laws (2 or 3).
    pub family_size: usize,
    /// Triples are drawn from this many leading basis events.
    pub triple_pool: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            event_cap: 64,
            family_size: 3,
            triple_pool: 12,
        }
    }
}

/// `Ω`, every `v(p)` and `¬v(p)`, the vacuous and full event of every space,
/// then pairwise conjunctions of those, deduplicated and truncated to the cap.
pub fn event_basis<M: UnawarenessStructure + ?Sized>(m: &M, cap: usize) -> Vec<Event> {
    let l = m.lattice();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |e: Event, out: &mut Vec<Event>| {
        if out.len() < cap && seen.insert(e.clone()) {
            out.push(e);
        }
    };
    push(l.omega(), &mut out);
    for p in 0..l.atoms().len() {
        push(m.valuation(p).clone(), &mut out);
        push(m.negate(m.valuation(p)), &mut out);
    }
    for sp in l.space_indices() {
        push(l.vacuous(sp), &mut out);
        push(l.full_event(sp), &mut out);
    }
    let seeds = out.clone();
    for (i, a) in seeds.iter().enumerate() {
        for b in &seeds[i + 1..] {
            push(m.conjoin(a, b), &mut out);
        }
    }
    out
}

/// Families of two and three basis events for the conjunction laws.
pub(crate) fn families(basis: &[Event], cfg: &SuiteConfig) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            out.push(vec![i, j]);
        }
    }
    if cfg.family_size >= 3 {
        let pool = cfg.triple_pool.min(basis.len());
        for i in 0..pool {
            for j in i + 1..pool {
                for k in j + 1..pool {
                    out.push(vec![i, j, k]);
                }
            }
        }
    }
    out
}

pub(crate) struct Ctx<'a> {
    pub l: &'a Lattice,
    pub agent: &'a str,
}

impl Ctx<'_> {
    pub fn ext(&self, e: &Event) -> StateSet {
        self.l.up_closure(e)
    }

    pub fn show(&self, e: &Event) -> String {
        self.l.describe_event(e)
    }

    /// Checks `lhs↑ = rhs↑`.
    pub fn same(&self, report: &mut Report, law: Law, e: &Event, lhs: &Event, rhs: &Event) {
        report.check(self.ext(lhs) == self.ext(rhs), law, || {
            format!(
                "agent {}, E = {}: {} vs {}",
                self.agent,
                self.show(e),
                self.show(lhs),
                self.show(rhs)
            )
        });
    }

    /// Checks `lhs↑ ⊆ rhs↑`.
    pub fn within(&self, report: &mut Report, law: Law, e: &Event, lhs: &Event, rhs: &Event) {
        report.check(self.ext(lhs).is_subset(&self.ext(rhs)), law, || {
            format!(
                "agent {}, E = {}: {} not within {}",
                self.agent,
                self.show(e),
                self.show(lhs),
                self.show(rhs)
            )
        });
    }

    /// Checks that `op` returned the `S(E)`-based event with extension `set`.
    pub fn based(&self, report: &mut Report, law: Law, e: &Event, op: &Event, set: &StateSet) {
        let ok = op.space() == e.space()
            && &self.ext(op) == set
            && (set.is_clear() || self.l.is_based_at(e.space(), set));
        report.check(ok, law, || {
            format!(
                "agent {}, E = {}: result {} is not the S(E)-based event {}",
                self.agent,
                self.show(e),
                self.show(op),
                self.l.describe(set)
            )
        });
    }
}

/// Intersection of the extensions of `(¬K)^n(E)` for `n ≥ 1`, iterated until
/// the sequence revisits an event.
fn strong_plausibility_limit<M: UnawarenessStructure + ?Sized>(m: &M, agent: usize, e: &Event) -> StateSet {
    let l = m.lattice();
    let mut acc = l.all_states();
    let mut seen = HashSet::new();
    let mut cur = e.clone();
    loop {
        cur = m.negate(&m.knows(agent, &cur));
        if !seen.insert(cur.clone()) {
            return acc;
        }
        acc.intersect_with(&l.up_closure(&cur));
    }
}

/// Runs every explicit-knowledge and awareness law for every agent over the
/// event basis. Assumes the structure validates; see
/// [`explicit_property_suite`](crate::hms::explicit_property_suite) for the
/// checked entry point.
pub fn explicit_laws<M: UnawarenessStructure + ?Sized>(m: &M, cfg: &SuiteConfig) -> Report {
    let l = m.lattice();
    let basis = event_basis(m, cfg.event_cap);
    let fams = families(&basis, cfg);
    let mut report = Report::new();

    for (i, agent) in m.agents().iter().enumerate() {
        let cx = Ctx { l, agent };
        let omega = l.omega();

        let k_omega = m.knows(i, &omega);
        cx.same(&mut report, Law::KnowledgeNecessitation, &omega, &k_omega, &omega);

        let knows: Vec<Event> = basis.iter().map(|e| m.knows(i, e)).collect();
        let aware: Vec<Event> = basis.iter().map(|e| m.aware(i, e)).collect();
        let knows_ext: Vec<StateSet> = knows.iter().map(|k| cx.ext(k)).collect();
        let aware_ext: Vec<StateSet> = aware.iter().map(|a| cx.ext(a)).collect();

        for (n, e) in basis.iter().enumerate() {
            let k = &knows[n];
            let a = &aware[n];
            cx.based(&mut report, Law::KnowledgeBased, e, k, &m.knows_set(i, e));
            cx.based(&mut report, Law::AwarenessBased, e, a, &m.aware_set(i, e));

            cx.within(&mut report, Law::KnowledgeTruth, e, k, e);
            let kk = m.knows(i, k);
            cx.within(&mut report, Law::KnowledgePositiveIntrospection, e, k, &kk);

            // ¬K(E) ∩ ¬K¬K(E) ⊆ ¬K¬K¬K(E)
            let nk = m.negate(k);
            let knk = m.knows(i, &nk);
            let nknk = m.negate(&knk);
            let nknknk = m.negate(&m.knows(i, &m.negate(&knk)));
            let lhs = m.conjoin(&nk, &nknk);
            cx.within(&mut report, Law::WeakNegativeIntrospectionOne, e, &lhs, &nknknk);

            let u = m.negate(a);
            let ku = m.knows(i, &u);
            report.check(ku == l.vacuous(e.space()), Law::KuIntrospection, || {
                format!(
                    "agent {agent}, E = {}: K(U(E)) = {}, expected the vacuous event of `{}`",
                    cx.show(e),
                    cx.show(&ku),
                    l.key(e.space())
                )
            });

            let uu = m.unaware(i, &u);
            cx.same(&mut report, Law::AuIntrospection, e, &u, &uu);

            let k_full = m.knows(i, &l.full_event(e.space()));
            cx.same(&mut report, Law::WeakNecessitation, e, a, &k_full);

            let mut plaus = knows_ext[n].clone();
            plaus.union_with(&cx.ext(&knk));
            report.check(aware_ext[n] == plaus, Law::Plausibility, || {
                format!(
                    "agent {agent}, E = {}: A(E) = {} but K(E) ∪ K¬K(E) = {}",
                    cx.show(e),
                    cx.show(a),
                    l.describe(&plaus)
                )
            });

            let limit = strong_plausibility_limit(m, i, e);
            report.check(cx.ext(&u) == limit, Law::StrongPlausibility, || {
                format!(
                    "agent {agent}, E = {}: U(E) = {} but ⋂(¬K)^n(E) = {}",
                    cx.show(e),
                    cx.show(&u),
                    l.describe(&limit)
                )
            });

            let lhs = m.conjoin(&nk, &m.aware(i, &nk));
            cx.same(&mut report, Law::WeakNegativeIntrospectionTwo, e, &lhs, &knk);

            cx.same(&mut report, Law::Symmetry, e, a, &m.aware(i, &m.negate(e)));
            cx.same(&mut report, Law::AkSelfReflection, e, a, &m.aware(i, k));
            cx.same(&mut report, Law::AaSelfReflection, e, a, &m.aware(i, a));
            cx.same(&mut report, Law::AwarenessIntrospection, e, a, &m.knows(i, a));
        }

        for (x, ex) in basis.iter().enumerate() {
            let ext_x = cx.ext(ex);
            for (y, ey) in basis.iter().enumerate() {
                if x != y && ext_x.is_subset(&cx.ext(ey)) {
                    report.check(knows_ext[x].is_subset(&knows_ext[y]), Law::KnowledgeMonotonicity, || {
                        format!(
                            "agent {agent}: {} ⊆ {} but K differs: {} vs {}",
                            cx.show(ex),
                            cx.show(ey),
                            cx.show(&knows[x]),
                            cx.show(&knows[y])
                        )
                    });
                }
            }
        }

        for fam in &fams {
            let meet = fam[1..]
                .iter()
                .fold(basis[fam[0]].clone(), |acc, &j| m.conjoin(&acc, &basis[j]));
            let mut k_meet = l.all_states();
            let mut a_meet = l.all_states();
            for &j in fam {
                k_meet.intersect_with(&knows_ext[j]);
                a_meet.intersect_with(&aware_ext[j]);
            }
            let k_of = cx.ext(&m.knows(i, &meet));
            let a_of = cx.ext(&m.aware(i, &meet));
            let names = || {
                fam.iter()
                    .map(|&j| cx.show(&basis[j]))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            report.check(k_of == k_meet, Law::KnowledgeConjunction, || {
                format!("agent {agent}, family [{}]", names())
            });
            report.check(a_of == a_meet, Law::AwarenessConjunction, || {
                format!("agent {agent}, family [{}]", names())
            });
        }

        report.extend(possibility_in_comparable_spaces(m, i));
    }
    report
}

/// `Π(ω) ⊆ S_Υ` and `Υ ⊆ Ψ ⊆ S_ω` imply `Π(ω_Ψ) = Π(ω)`.
pub fn possibility_in_comparable_spaces<M: UnawarenessStructure + ?Sized>(m: &M, agent: usize) -> Report {
    let l = m.lattice();
    let mut report = Report::new();
    for w in 0..l.state_count() {
        let own = l.space_of(w);
        let Some(level) = m.possibility_space(agent, w) else {
            continue;
        };
        if !level.is_subset(own) {
            continue;
        }
        for extra in own.difference(level).subsets() {
            let psi: AtomSet = level.union(extra);
            let wp = l.project(w, psi).expect("below own space");
            report.check(m.possibility(agent, wp) == m.possibility(agent, w), Law::PossibilityInComparableSpaces, || {
                format!(
                    "agent {}: Π({}) = {} but Π({}) = {}",
                    m.agents()[agent],
                    l.label(wp),
                    l.describe(m.possibility(agent, wp)),
                    l.label(w),
                    l.describe(m.possibility(agent, w))
                )
            });
        }
    }
    report
}
