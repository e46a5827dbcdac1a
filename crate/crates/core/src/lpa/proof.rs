//! Hilbert-style proofs: parsing proof files and checking each line.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lpa::schema::{match_schema, pattern, Substitution};
use crate::syntax::{parse_any_agent, Formula, Modality};

/// Most distinct letters a propositional skeleton may have.
pub const MAX_SKELETON_LETTERS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// Instance of a propositional tautology.
    Taut,
    /// Instance of a named schema, optionally with the intended substitution.
    Axiom { name: String, sub: Option<Substitution> },
    /// From line `premise` (`φ`) and line `implication` (`φ → ψ`), both
    /// 1-based.
    ModusPonens { premise: usize, implication: usize },
    /// From line `from` (`φ`) infer `l_i φ`.
    Necessitation { from: usize },
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Taut => f.write_str("taut"),
            Justification::Axiom { name, sub: None } => write!(f, "ax:{name}"),
            Justification::Axiom { name, sub: Some(s) } => write!(f, "ax:{name} {s}"),
            Justification::ModusPonens { premise, implication } => write!(f, "mp {premise} {implication}"),
            Justification::Necessitation { from } => write!(f, "nec {from}"),
        }
    }
}

impl Justification {
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        if text == "taut" {
            return Ok(Justification::Taut);
        }
        if let Some(rest) = text.strip_prefix("ax:") {
            let (name, sub) = match rest.split_once(char::is_whitespace) {
                Some((name, sub)) if !sub.trim().is_empty() => (name, Some(Substitution::parse(sub)?)),
                Some((name, _)) => (name, None),
                None => (rest, None),
            };
            if name.is_empty() {
                return Err("missing schema name after `ax:`".into());
            }
            return Ok(Justification::Axiom {
                name: name.to_string(),
                sub,
            });
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| format!("`{s}` is not a line number"));
        match words.as_slice() {
            ["mp", a, b] => Ok(Justification::ModusPonens {
                premise: num(a)?,
                implication: num(b)?,
            }),
            ["nec", a] => Ok(Justification::Necessitation { from: num(a)? }),
            _ => Err(format!("unrecognised justification `{text}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub by: Justification,
}

/// One entry of a proof file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofEntry {
    pub formula: String,
    pub by: String,
}

/// A proof file that cannot be read as a proof at all.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("proof line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

/// Parses one JSON object per nonempty line. Proof line numbers count
/// entries, not text lines.
pub fn parse_proof(text: &str) -> Result<Vec<ProofLine>, ProofParseError> {
    let mut out = Vec::new();
    for raw in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let line = out.len() + 1;
        let err = |message: String| ProofParseError { line, message };
        let entry: ProofEntry = serde_json::from_str(raw).map_err(|e| err(e.to_string()))?;
        let formula = parse_any_agent(&entry.formula).map_err(|e| err(e.to_string()))?;
        let by = Justification::parse(&entry.by).map_err(err)?;
        out.push(ProofLine { formula, by });
    }
    Ok(out)
}

pub fn render_proof(lines: &[ProofLine]) -> String {
    lines
        .iter()
        .map(|l| {
            let entry = ProofEntry {
                formula: l.formula.render(),
                by: l.by.to_string(),
            };
            serde_json::to_string(&entry).expect("entries serialize") + "\n"
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineFailure {
    /// 1-based.
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub accepted: bool,
    pub lines: usize,
    /// The first unjustified line.
    pub failure: Option<LineFailure>,
    /// The last formula of an accepted proof.
    pub conclusion: Option<String>,
}

/// Evaluates the propositional skeleton of `f` in which atoms, `T` aside,
/// and maximal modal subformulas are letters. `None` if there are too many
/// letters to enumerate.
pub fn is_tautology(f: &Formula) -> Option<bool> {
    fn letters<'a>(f: &'a Formula, map: &mut HashMap<&'a Formula, usize>) {
        match f {
            Formula::Top => {}
            Formula::Not(a) => letters(a, map),
            Formula::And(a, b) => {
                letters(a, map);
                letters(b, map);
            }
            Formula::Atom(_) | Formula::Modal(..) => {
                let n = map.len();
                map.entry(f).or_insert(n);
            }
        }
    }
    fn eval(f: &Formula, map: &HashMap<&Formula, usize>, bits: u32) -> bool {
        match f {
            Formula::Top => true,
            Formula::Not(a) => !eval(a, map, bits),
            Formula::And(a, b) => eval(a, map, bits) && eval(b, map, bits),
            Formula::Atom(_) | Formula::Modal(..) => bits >> map[f] & 1 == 1,
        }
    }
    let mut map = HashMap::new();
    letters(f, &mut map);
    if map.len() > MAX_SKELETON_LETTERS {
        return None;
    }
    Some((0..1u32 << map.len()).all(|bits| eval(f, &map, bits)))
}

fn check_line(lines: &[ProofLine], n: usize) -> Result<(), String> {
    let line = &lines[n];
    let earlier = |k: usize, what: &str| -> Result<&Formula, String> {
        if k == 0 || k > n {
            Err(format!("{what} refers to line {k}, which does not precede line {}", n + 1))
        } else {
            Ok(&lines[k - 1].formula)
        }
    };
    match &line.by {
        Justification::Taut => match is_tautology(&line.formula) {
            Some(true) => Ok(()),
            Some(false) => Err("propositional skeleton is falsifiable".into()),
            None => Err(format!("skeleton has more than {MAX_SKELETON_LETTERS} letters")),
        },
        Justification::Axiom { name, sub } => {
            if pattern(name).is_none() {
                return Err(format!("unknown axiom schema `{name}`"));
            }
            let found = match_schema(name, &line.formula).ok_or_else(|| format!("not an instance of `{name}`"))?;
            // a partial substitution only has to agree with the match
            if let Some(sub) = sub {
                if !sub.agrees_with(&found) {
                    return Err(format!("instance of `{name}` under a different substitution than `{sub}`"));
                }
            }
            Ok(())
        }
        Justification::ModusPonens { premise, implication } => {
            let phi = earlier(*premise, "mp")?;
            let imp = earlier(*implication, "mp")?;
            match imp.as_implication() {
                Some((a, b)) if a == phi && b == &line.formula => Ok(()),
                Some(_) => Err(format!("line {implication} is not `{} -> {}`", phi, line.formula)),
                None => Err(format!("line {implication} is not an implication")),
            }
        }
        Justification::Necessitation { from } => {
            let phi = earlier(*from, "nec")?;
            match &line.formula {
                Formula::Modal(Modality::Implicit, _, inner) if inner.as_ref() == phi => Ok(()),
                _ => Err(format!("not of the form `l_i` applied to line {from}")),
            }
        }
    }
}

/// Accepts iff every line is justified; otherwise reports the first line
/// that is not.
pub fn check_proof(lines: &[ProofLine]) -> Verdict {
    for n in 0..lines.len() {
        if let Err(reason) = check_line(lines, n) {
            return Verdict {
                accepted: false,
                lines: lines.len(),
                failure: Some(LineFailure { line: n + 1, reason }),
                conclusion: None,
            };
        }
    }
    Verdict {
        accepted: true,
        lines: lines.len(),
        failure: None,
        conclusion: lines.last().map(|l| l.formula.render()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(f: &str, by: &str) -> ProofLine {
        ProofLine {
            formula: parse_any_agent(f).unwrap(),
            by: Justification::parse(by).unwrap(),
        }
    }

    fn a_neg_twice() -> Vec<ProofLine> {
        vec![
            line("a_1 ~~p <-> a_1 ~p", "ax:a-neg phi=~p; i=1"),
            line("a_1 ~p <-> a_1 p", "ax:a-neg"),
            line(
                "(a_1 ~~p <-> a_1 ~p) -> ((a_1 ~p <-> a_1 p) -> (a_1 p -> a_1 ~~p))",
                "taut",
            ),
            line("(a_1 ~p <-> a_1 p) -> (a_1 p -> a_1 ~~p)", "mp 1 3"),
            line("a_1 p -> a_1 ~~p", "mp 2 4"),
        ]
    }

    #[test]
    fn double_negation_under_awareness_is_provable() {
        let v = check_proof(&a_neg_twice());
        assert!(v.accepted, "{v:?}");
        assert_eq!(v.conclusion.as_deref(), Some(parse_any_agent("a_1 p -> a_1 ~~p").unwrap().render().as_str()));
    }

    #[test]
    fn top_alone_is_a_proof() {
        assert!(check_proof(&[line("T", "taut")]).accepted);
        assert!(check_proof(&[]).accepted);
    }

    #[test]
    fn mp_on_a_non_implication_fails_at_that_line() {
        let lines = vec![line("T", "taut"), line("T & T", "taut"), line("p", "mp 1 2")];
        let v = check_proof(&lines);
        assert_eq!(v.failure.unwrap().line, 3);
    }

    #[test]
    fn forward_references_are_rejected() {
        let v = check_proof(&[line("l_1 T", "nec 1")]);
        assert_eq!(v.failure.unwrap().line, 1);
    }

    #[test]
    fn wrong_substitution_is_rejected() {
        let v = check_proof(&[line("a_1 ~p <-> a_1 p", "ax:a-neg phi=q")]);
        assert!(!v.accepted);
    }

    #[test]
    fn modal_letters_are_opaque() {
        assert_eq!(is_tautology(&parse_any_agent("l_1 p -> p").unwrap()), Some(false));
        assert_eq!(is_tautology(&parse_any_agent("l_1 p | ~l_1 p").unwrap()), Some(true));
    }

    #[test]
    fn proofs_round_trip_through_text() {
        let p = a_neg_twice();
        assert_eq!(parse_proof(&render_proof(&p)).unwrap(), p);
    }

    #[test]
    fn concatenating_accepted_proofs_stays_accepted() {
        let mut p = a_neg_twice();
        p.extend(a_neg_twice());
        assert!(check_proof(&p).accepted);
    }

    #[test]
    fn malformed_entries_report_their_line() {
        let text = "{\"formula\": \"T\", \"by\": \"taut\"}\n\n{\"formula\": \"T &\", \"by\": \"taut\"}\n";
        assert_eq!(parse_proof(text).unwrap_err().line, 2);
    }
}
