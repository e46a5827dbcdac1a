//! Axiom schemata as formula patterns and structural matching against them.
//!
//! A pattern is an ordinary formula in which the atoms `phi` and `psi` stand
//! for arbitrary formulas and the agents `i` and `j` for arbitrary agents.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::syntax::{parse_any_agent, Formula};

/// The twelve axiom schemata. Modus ponens and necessitation are rules and
/// are checked by the proof checker, not matched.
pub const SCHEMATA: [(&str, &str); 12] = [
    ("l-dist", "(l_i phi & l_i (phi -> psi)) -> l_i psi"),
    ("k-def", "k_i phi <-> (l_i phi & a_i phi)"),
    ("a-conj", "a_i (phi & psi) <-> (a_i phi & a_i psi)"),
    ("a-neg", "a_i ~phi <-> a_i phi"),
    ("a-k", "a_i k_j phi <-> a_i phi"),
    ("a-a", "a_i a_j phi <-> a_i phi"),
    ("a-l", "a_i l_j phi <-> a_i phi"),
    ("a-intro", "a_i phi -> l_i a_i phi"),
    ("na-intro", "~a_i phi -> l_i ~a_i phi"),
    ("l-t", "l_i phi -> phi"),
    ("l-4", "l_i phi -> l_i l_i phi"),
    ("l-5", "~l_i phi -> l_i ~l_i phi"),
];

/// The two inference rules, named as in proof files.
pub const RULES: [&str; 2] = ["mp", "nec"];

const FORMULA_VARS: [&str; 2] = ["phi", "psi"];
const AGENT_VARS: [&str; 2] = ["i", "j"];

/// An assignment of formulas to `phi`/`psi` and agents to `i`/`j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    pub formulas: BTreeMap<String, Formula>,
    pub agents: BTreeMap<String, String>,
}

impl Substitution {
    /// Parses `phi=p; psi=a_1 q; i=1`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut out = Substitution::default();
        for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("substitution entry `{part}` is not `name=value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if FORMULA_VARS.contains(&key) {
                let f = parse_any_agent(value).map_err(|e| format!("{key}: {e}"))?;
                out.formulas.insert(key.to_string(), f);
            } else if AGENT_VARS.contains(&key) {
                if value.is_empty() || !value.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(format!("invalid agent `{value}` for `{key}`"));
                }
                out.agents.insert(key.to_string(), value.to_string());
            } else {
                return Err(format!("unknown metavariable `{key}`"));
            }
        }
        Ok(out)
    }

    /// True iff every binding of `self` is also in `other`.
    pub fn agrees_with(&self, other: &Substitution) -> bool {
        self.formulas.iter().all(|(k, v)| other.formulas.get(k) == Some(v))
            && self.agents.iter().all(|(k, v)| other.agents.get(k) == Some(v))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.formulas.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.extend(self.agents.iter().map(|(k, v)| format!("{k}={v}")));
        f.write_str(&parts.join("; "))
    }
}

fn patterns() -> &'static Vec<(&'static str, Formula)> {
    static CELL: OnceLock<Vec<(&'static str, Formula)>> = OnceLock::new();
    CELL.get_or_init(|| {
        SCHEMATA
            .iter()
            .map(|&(name, text)| (name, parse_any_agent(text).expect("schema patterns parse")))
            .collect()
    })
}

/// The pattern of a named schema.
pub fn pattern(name: &str) -> Option<&'static Formula> {
    patterns().iter().find(|(n, _)| *n == name).map(|(_, f)| f)
}

fn bind<V: PartialEq + Clone>(map: &mut BTreeMap<String, V>, key: &str, value: &V) -> bool {
    match map.get(key) {
        Some(v) => v == value,
        None => {
            map.insert(key.to_string(), value.clone());
            true
        }
    }
}

fn unify(pat: &Formula, f: &Formula, sub: &mut Substitution) -> bool {
    match (pat, f) {
        (Formula::Atom(v), _) if FORMULA_VARS.contains(&v.as_str()) => bind(&mut sub.formulas, v, f),
        (Formula::Top, Formula::Top) => true,
        (Formula::Atom(a), Formula::Atom(b)) => a == b,
        (Formula::Not(a), Formula::Not(b)) => unify(a, b, sub),
        (Formula::And(a1, a2), Formula::And(b1, b2)) => unify(a1, b1, sub) && unify(a2, b2, sub),
        (Formula::Modal(m1, i, a), Formula::Modal(m2, j, b)) => {
            m1 == m2 && bind(&mut sub.agents, i, j) && unify(a, b, sub)
        }
        _ => false,
    }
}

/// The assignment making schema `name` syntactically equal to `f`, if any.
/// Returns `None` for unknown names as well.
pub fn match_schema(name: &str, f: &Formula) -> Option<Substitution> {
    let pat = pattern(name)?;
    let mut sub = Substitution::default();
    unify(pat, f, &mut sub).then_some(sub)
}

/// Replaces metavariables by their bindings; unbound ones are left in place.
pub fn instantiate(pat: &Formula, sub: &Substitution) -> Formula {
    match pat {
        Formula::Atom(v) => sub.formulas.get(v).cloned().unwrap_or_else(|| pat.clone()),
        Formula::Top => Formula::Top,
        Formula::Not(a) => Formula::not(instantiate(a, sub)),
        Formula::And(a, b) => Formula::and(instantiate(a, sub), instantiate(b, sub)),
        Formula::Modal(m, i, a) => {
            let agent = sub.agents.get(i).cloned().unwrap_or_else(|| i.clone());
            Formula::modal(*m, agent, instantiate(a, sub))
        }
    }
}

/// Instance of schema `name` under `sub`.
pub fn instance(name: &str, sub: &Substitution) -> Option<Formula> {
    pattern(name).map(|p| instantiate(p, sub))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_any_agent(s).unwrap()
    }

    #[test]
    fn a_neg_matches_with_bindings() {
        let sub = match_schema("a-neg", &f("a_1 ~p <-> a_1 p")).unwrap();
        assert_eq!(sub.formulas["phi"], f("p"));
        assert_eq!(sub.agents["i"], "1");
    }

    #[test]
    fn k_def_matches() {
        assert!(match_schema("k-def", &f("k_1 p <-> (l_1 p & a_1 p)")).is_some());
    }

    #[test]
    fn non_instances_fail() {
        assert!(match_schema("a-neg", &f("a_1 p -> a_1 q")).is_none());
        assert!(match_schema("a-neg", &f("a_1 ~p <-> a_2 p")).is_none());
        assert!(match_schema("mp", &f("p")).is_none());
    }

    #[test]
    fn distinct_agents_may_bind_to_the_same_name() {
        assert!(match_schema("a-k", &f("a_1 k_1 p <-> a_1 p")).is_some());
        assert!(match_schema("a-k", &f("a_1 k_2 p <-> a_1 p")).is_some());
    }

    #[test]
    fn instantiation_inverts_matching() {
        for (name, _) in SCHEMATA {
            let sub = Substitution::parse("phi=a_2 q; psi=~p; i=1; j=2").unwrap();
            let inst = instance(name, &sub).unwrap();
            let back = match_schema(name, &inst).unwrap();
            assert!(back.agrees_with(&sub), "{name}");
            assert_eq!(instantiate(pattern(name).unwrap(), &back), inst);
        }
    }

    #[test]
    fn substitutions_parse_and_print() {
        let sub = Substitution::parse("phi = p & q ; i=1").unwrap();
        assert_eq!(sub.formulas["phi"], f("p & q"));
        assert!(Substitution::parse("chi=p").is_err());
        assert!(Substitution::parse("i=a b").is_err());
        assert_eq!(Substitution::parse(&sub.to_string()).unwrap(), sub);
    }
}
