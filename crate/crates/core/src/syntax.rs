//! The formula language: atoms, `T`, negation, conjunction and the three
//! per-agent modalities (implicit knowledge `l_i`, awareness `a_i`, explicit
//! knowledge `k_i`).
//!
//! Concrete grammar, loosest binding first:
//!
//! ```text
//! iff    := imp ("<->" imp)*          left associative
//! imp    := or ("->" imp)?            right associative
//! or     := and ("|" and)*
//! and    := unary ("&" unary)*
//! unary  := "~" unary | MODAL unary | "T" | ATOM | "(" iff ")"
//! MODAL  := ("l_" | "a_" | "k_") AGENT
//! ```
//!
//! `|`, `->` and `<->` are sugar and are rewritten into `~`/`&` while parsing,
//! so every [`Formula`] is built from the primitive constructors only.

use std::collections::BTreeSet;
use std::fmt;

use crate::atoms::{AtomSet, AtomTable};
use crate::error::{ModelError, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    /// `l_i`: implicit knowledge.
    Implicit,
    /// `a_i`: awareness.
    Aware,
    /// `k_i`: explicit knowledge.
    Explicit,
}

impl Modality {
    pub const ALL: [Modality; 3] = [Modality::Implicit, Modality::Aware, Modality::Explicit];

    pub fn prefix(self) -> &'static str {
        match self {
            Modality::Implicit => "l",
            Modality::Aware => "a",
            Modality::Explicit => "k",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Modal(Modality, String, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn bottom() -> Self {
        Formula::not(Formula::Top)
    }

    pub fn modal(m: Modality, agent: impl Into<String>, f: Formula) -> Self {
        Formula::Modal(m, agent.into(), Box::new(f))
    }

    pub fn implicit(agent: impl Into<String>, f: Formula) -> Self {
        Formula::modal(Modality::Implicit, agent, f)
    }

    pub fn aware(agent: impl Into<String>, f: Formula) -> Self {
        Formula::modal(Modality::Aware, agent, f)
    }

    pub fn knows(agent: impl Into<String>, f: Formula) -> Self {
        Formula::modal(Modality::Explicit, agent, f)
    }

    /// Names of the atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Not(f) | Formula::Modal(_, _, f) => f.collect_atoms(out),
            Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// The atom set of the formula as a subset of `table`.
    pub fn atom_set(&self, table: &AtomTable) -> Result<AtomSet, ModelError> {
        let names: Vec<String> = self.atoms().into_iter().collect();
        table.set_of(&names)
    }

    /// Whether the formula belongs to the sublanguage over `language`.
    pub fn in_language<S: AsRef<str>>(&self, language: &[S]) -> bool {
        self.atoms()
            .iter()
            .all(|p| language.iter().any(|q| q.as_ref() == p))
    }

    pub fn agents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Modal(_, i, _) = f {
                out.insert(i.clone());
            }
        });
        out
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Modal(_, _, f) => 1 + f.modal_depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Modal(_, _, f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Pre-order traversal over all subformulas, `self` included.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Top | Formula::Atom(_) => {}
            Formula::Not(g) | Formula::Modal(_, _, g) => g.visit(f),
            Formula::And(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.visit(&mut |g| out.push(g));
        out
    }

    /// Splits `~(a & ~b)` into `(a, b)`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::And(a, nb) = inner.as_ref() {
                if let Formula::Not(b) = nb.as_ref() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Canonical fully parenthesized text; [`parse`] inverts it.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s);
        s
    }

    fn render_into(&self, s: &mut String) {
        match self {
            Formula::Top => s.push('T'),
            Formula::Atom(p) => s.push_str(p),
            Formula::Not(f) => {
                s.push_str("(~ ");
                f.render_into(s);
                s.push(')');
            }
            Formula::And(a, b) => {
                s.push('(');
                a.render_into(s);
                s.push_str(" & ");
                b.render_into(s);
                s.push(')');
            }
            Formula::Modal(m, i, f) => {
                s.push('(');
                s.push_str(m.prefix());
                s.push('_');
                s.push_str(i);
                s.push(' ');
                f.render_into(s);
                s.push(')');
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses `text`, requiring every modal agent to be one of `agents`.
pub fn parse<S: AsRef<str>>(text: &str, agents: &[S]) -> Result<Formula, SyntaxError> {
    Parser::new(text, Some(agents.iter().map(|a| a.as_ref().to_string()).collect()))?.run()
}

/// Parses `text` accepting any agent token.
pub fn parse_any_agent(text: &str) -> Result<Formula, SyntaxError> {
    Parser::new(text, None)?.run()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Top,
    Atom(String),
    Modal(Modality, String),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    agents: Option<Vec<String>>,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '~' | '!' => {
                i += 1;
                Tok::Not
            }
            '&' => {
                i += 1;
                Tok::And
            }
            '|' => {
                i += 1;
                Tok::Or
            }
            '-' if text[i..].starts_with("->") => {
                i += 2;
                Tok::Implies
            }
            '<' if text[i..].starts_with("<->") => {
                i += 3;
                Tok::Iff
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let rest = &text[i..];
                let len = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
                let word = &rest[..len];
                i += len;
                classify(word, start)?
            }
            _ => {
                return Err(SyntaxError::new(start, format!("unexpected character `{c}`")));
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

fn classify(word: &str, offset: usize) -> Result<Tok, SyntaxError> {
    if word == "T" {
        return Ok(Tok::Top);
    }
    let modal = match word.get(..2) {
        Some("l_") => Some(Modality::Implicit),
        Some("a_") => Some(Modality::Aware),
        Some("k_") => Some(Modality::Explicit),
        _ => None,
    };
    if let Some(m) = modal {
        let agent = &word[2..];
        if agent.is_empty() {
            return Err(SyntaxError::new(offset, format!("missing agent in `{word}`")));
        }
        return Ok(Tok::Modal(m, agent.to_string()));
    }
    if crate::atoms::is_atom_name(word) {
        Ok(Tok::Atom(word.to_string()))
    } else {
        Err(SyntaxError::new(offset, format!("invalid atom `{word}`")))
    }
}

impl Parser {
    fn new(text: &str, agents: Option<Vec<String>>) -> Result<Self, SyntaxError> {
        if text.trim().is_empty() {
            return Err(SyntaxError::new(0, "empty formula"));
        }
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
            agents,
        })
    }

    fn run(mut self) -> Result<Formula, SyntaxError> {
        let f = self.iff()?;
        if let Some((off, tok)) = self.toks.get(self.pos) {
            return Err(SyntaxError::new(*off, format!("stray token {tok:?}")));
        }
        Ok(f)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let off = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(SyntaxError::new(off, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Modal(m, agent) => {
                if let Some(agents) = &self.agents {
                    if !agents.contains(&agent) {
                        return Err(SyntaxError::new(off, format!("unknown agent `{agent}`")));
                    }
                }
                Ok(Formula::modal(m, agent, self.unary()?))
            }
            Tok::Top => Ok(Formula::Top),
            Tok::Atom(p) => Ok(Formula::Atom(p)),
            Tok::LParen => {
                let f = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(SyntaxError::new(self.offset(), "expected `)`"));
                }
                Ok(f)
            }
            other => Err(SyntaxError::new(off, format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Formula {
        Formula::atom(name)
    }

    #[test]
    fn parses_modal_atom() {
        assert_eq!(parse("k_1 p", &["1"]).unwrap(), Formula::knows("1", p("p")));
    }

    #[test]
    fn negation_and_modalities_bind_tighter_than_conjunction() {
        let f = parse("a_1 ~q & l_1 p", &["1"]).unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::aware("1", Formula::not(p("q"))),
                Formula::implicit("1", p("p"))
            )
        );
    }

    #[test]
    fn unknown_agent_is_a_syntax_error() {
        let err = parse("k_2 p", &["1"]).unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.message.contains("unknown agent"));
    }

    #[test]
    fn reports_unbalanced_and_stray_tokens() {
        assert_eq!(parse("(p & q", &["1"]).unwrap_err().offset, 6);
        assert_eq!(parse("p q", &["1"]).unwrap_err().offset, 2);
        assert!(parse("   ", &["1"]).is_err());
        assert!(parse("p $ q", &["1"]).is_err());
    }

    #[test]
    fn derived_connectives_desugar() {
        let f = parse("p -> q", &["1"]).unwrap();
        assert_eq!(f, Formula::not(Formula::and(p("p"), Formula::not(p("q")))));
        let g = parse("p | q", &["1"]).unwrap();
        assert_eq!(g, Formula::or(p("p"), p("q")));
        let h = parse("p & q -> q", &["1"]).unwrap();
        assert_eq!(h, Formula::implies(Formula::and(p("p"), p("q")), p("q")));
        let r = parse("p -> q -> p", &["1"]).unwrap();
        assert_eq!(r, Formula::implies(p("p"), Formula::implies(p("q"), p("p"))));
        assert_eq!(parse("p <-> q", &["1"]).unwrap(), Formula::iff(p("p"), p("q")));
    }

    #[test]
    fn atoms_of_formulas() {
        assert_eq!(
            Formula::knows("1", p("p")).atoms(),
            BTreeSet::from(["p".to_string()])
        );
        assert!(Formula::Top.atoms().is_empty());
        let f = Formula::and(
            Formula::aware("1", p("p")),
            Formula::implicit("1", Formula::not(p("q"))),
        );
        assert_eq!(f.atoms(), BTreeSet::from(["p".to_string(), "q".to_string()]));
    }

    #[test]
    fn render_examples() {
        assert_eq!(Formula::knows("1", p("p")).render(), "(k_1 p)");
        assert_eq!(Formula::not(Formula::Top).render(), "(~ T)");
        assert_eq!(Formula::and(p("p"), p("q")).render(), "(p & q)");
    }

    #[test]
    fn agents_may_be_arbitrary_tokens() {
        let f = parse("l_alice a_b_2 p", &["alice", "b_2"]).unwrap();
        assert_eq!(f, Formula::implicit("alice", Formula::aware("b_2", p("p"))));
        assert_eq!(f.modal_depth(), 2);
    }
}
