//! Two bundled complemented models on `At = {p, q}` with one agent.
//!
//! Both share the explicit correspondence: at a state of `S_{p,q}` the agent
//! is aware of `p` only and knows its truth value. They differ in implicit
//! knowledge: in `fig1L` it is exactly as coarse as explicit knowledge, in
//! `fig1R` every implicit possibility set is a singleton.

use crate::implicit::ComplementedModel;
use crate::io::{parse_model, AnyModel};

pub const FIG1L: &str = include_str!("../fixtures/fig1L.model");
pub const FIG1R: &str = include_str!("../fixtures/fig1R.model");

fn load(text: &str) -> ComplementedModel {
    match parse_model(text).expect("bundled fixture parses") {
        AnyModel::Complemented(c) => c,
        other => panic!("bundled fixture has family {}", other.family()),
    }
}

pub fn fig1l() -> ComplementedModel {
    load(FIG1L)
}

pub fn fig1r() -> ComplementedModel {
    load(FIG1R)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomSet;
    use crate::hms::UnawarenessStructure;
    use crate::hms::{explicit_property_suite, SuiteConfig};
    use crate::implicit::implicit_property_suite;

    #[test]
    fn both_fixtures_validate() {
        for c in [fig1l(), fig1r()] {
            let r = c.validate();
            assert!(r.is_empty(), "{r}");
        }
    }

    #[test]
    fn both_fixtures_pass_the_suites() {
        let cfg = SuiteConfig::default();
        for c in [fig1l(), fig1r()] {
            let r = explicit_property_suite(&c.base, &cfg).unwrap();
            assert!(r.is_empty(), "{r}");
            let r = implicit_property_suite(&c, &cfg).unwrap();
            assert!(r.is_empty(), "{r}");
        }
    }

    #[test]
    fn projections_follow_state_names() {
        let c = fig1l();
        let l = c.lattice();
        let pq = l.parse_state("pq:pq").unwrap();
        assert_eq!(l.label(l.project(pq, AtomSet::singleton(1)).unwrap()), "q:q");
        assert_eq!(l.project(pq, l.top()), Some(pq));
        let npnq = l.parse_state("pq:~p~q").unwrap();
        assert_eq!(l.label(l.project(npnq, AtomSet::EMPTY).unwrap()), ":*");
    }

    #[test]
    fn valuation_of_p_lifts_to_three_states() {
        let c = fig1l();
        let l = c.lattice();
        let up = l.up_closure(c.valuation(0));
        let names: Vec<String> = up.ones().map(|s| l.label(s)).collect();
        assert_eq!(names, ["p:p", "p,q:pq", "p,q:p~q"]);
    }

    #[test]
    fn unaware_of_q_at_pq() {
        let c = fig1l();
        let l = c.lattice();
        let pq = l.parse_state("pq:pq").unwrap();
        let a = c.aware(0, c.valuation(1));
        assert!(!l.up_closure(&a).contains(pq));
        let k = c.knows(0, c.valuation(0));
        assert!(l.up_closure(&k).contains(pq));
    }
}
