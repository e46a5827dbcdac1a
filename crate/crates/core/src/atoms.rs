//! Atom tables and atom subsets.
//!
//! Every model works over a finite, sorted universe of atom names. Subsets of
//! that universe index the state spaces of the lattice, the sublanguages of a
//! category, and the awareness levels of agents, so they are stored as bit
//! masks over the table.

use std::fmt;

use crate::error::ModelError;

/// Hard ceiling on the universe size; masks are `u32` and the lattice is
/// materialized eagerly.
pub const ATOM_HARD_LIMIT: usize = 16;

/// Default cap on `|At|`, overridable with `AWAREKIT_MAX_ATOMS`.
pub const DEFAULT_MAX_ATOMS: usize = 6;

/// Returns the active cap on the number of atoms.
pub fn max_atoms() -> usize {
    std::env::var("AWAREKIT_MAX_ATOMS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|n| n.min(ATOM_HARD_LIMIT))
        .unwrap_or(DEFAULT_MAX_ATOMS)
}

/// A subset of an [`AtomTable`], encoded as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSet(u32);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn from_bits(bits: u32) -> Self {
        AtomSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Index of this set when spaces are stored densely.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn singleton(atom: usize) -> Self {
        AtomSet(1 << atom)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n == 0 {
            AtomSet(0)
        } else {
            AtomSet(u32::MAX >> (32 - n))
        }
    }

    pub fn contains(self, atom: usize) -> bool {
        self.0 & (1 << atom) != 0
    }

    pub fn is_subset(self, other: AtomSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: AtomSet) -> Self {
        AtomSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AtomSet) -> Self {
        AtomSet(self.0 & other.0)
    }

    pub fn difference(self, other: AtomSet) -> Self {
        AtomSet(self.0 & !other.0)
    }

    pub fn insert(&mut self, atom: usize) {
        self.0 |= 1 << atom;
    }

    pub fn remove(self, atom: usize) -> Self {
        AtomSet(self.0 & !(1 << atom))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Atom indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = AtomSet> {
        // Standard submask enumeration, walked downwards then reversed so the
        // empty set comes first.
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = self.0;
        loop {
            out.push(AtomSet(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.into_iter().rev()
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AtomSet({:#b})", self.0)
    }
}

/// Sorted, duplicate-free list of atom names.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AtomTable {
    names: Vec<String>,
}

impl AtomTable {
    pub fn new<I, S>(names: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        for name in &names {
            if !is_atom_name(name) {
                return Err(ModelError::BadName(name.clone()));
            }
        }
        names.sort();
        let before = names.len();
        names.dedup();
        if names.len() != before {
            return Err(ModelError::Duplicate("atom".into()));
        }
        if names.len() > max_atoms() {
            return Err(ModelError::TooManyAtoms {
                count: names.len(),
                cap: max_atoms(),
            });
        }
        Ok(AtomTable { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, atom: usize) -> &str {
        &self.names[atom]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn full(&self) -> AtomSet {
        AtomSet::full(self.names.len())
    }

    /// Canonical key of a subset: member names joined by `,`; `""` for the
    /// empty set.
    pub fn key(&self, set: AtomSet) -> String {
        set.iter()
            .map(|i| self.names[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn names_of(&self, set: AtomSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<AtomSet, ModelError> {
        let mut set = AtomSet::EMPTY;
        for name in names {
            let idx = self
                .index_of(name.as_ref())
                .ok_or_else(|| ModelError::UnknownAtom(name.as_ref().to_string()))?;
            set.insert(idx);
        }
        Ok(set)
    }

    /// Parses a space key. The canonical form separates names by commas; a
    /// single token that is not itself an atom is also accepted when it splits
    /// into atom names in exactly one way (so `pq` names `{p, q}`).
    pub fn parse_key(&self, key: &str) -> Result<AtomSet, ModelError> {
        let key = key.trim();
        if key.is_empty() || key == "{}" {
            return Ok(AtomSet::EMPTY);
        }
        if key.contains(',') {
            let parts: Vec<&str> = key.split(',').map(str::trim).collect();
            return self.set_of(&parts);
        }
        if let Some(i) = self.index_of(key) {
            return Ok(AtomSet::singleton(i));
        }
        let mut found = Vec::new();
        self.segment(key, AtomSet::EMPTY, &mut found);
        found.sort();
        found.dedup();
        match found.as_slice() {
            [one] => Ok(*one),
            [] => Err(ModelError::UnknownSpace(key.to_string())),
            _ => Err(ModelError::AmbiguousSpaceKey(key.to_string())),
        }
    }

    fn segment(&self, rest: &str, acc: AtomSet, found: &mut Vec<AtomSet>) {
        if rest.is_empty() {
            found.push(acc);
            return;
        }
        for (i, name) in self.names.iter().enumerate() {
            if !acc.contains(i) && rest.starts_with(name.as_str()) {
                self.segment(&rest[name.len()..], acc.union(AtomSet::singleton(i)), found);
            }
        }
    }
}

/// Atom names: nonempty, `[a-zA-Z0-9_]`, alphabetic first character, and
/// never a word the formula lexer reads otherwise (`T`, `l_…`, `a_…`, `k_…`).
pub fn is_atom_name(s: &str) -> bool {
    if s == "T" || ["l_", "a_", "k_"].iter().any(|m| s.starts_with(m)) {
        return false;
    }
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> AtomTable {
        AtomTable::new(["q", "p"]).unwrap()
    }

    #[test]
    fn keys_are_sorted_and_comma_joined() {
        let t = table();
        assert_eq!(t.names(), ["p", "q"]);
        assert_eq!(t.key(t.full()), "p,q");
        assert_eq!(t.key(AtomSet::EMPTY), "");
        assert_eq!(t.parse_key("p,q").unwrap(), t.full());
        assert_eq!(t.parse_key("q").unwrap(), AtomSet::singleton(1));
    }

    #[test]
    fn concatenated_keys_resolve_when_unique() {
        let t = table();
        assert_eq!(t.parse_key("pq").unwrap(), t.full());
        let amb = AtomTable::new(["a", "ab", "b"]).unwrap();
        assert!(matches!(
            amb.parse_key("ab"),
            Ok(s) if s == AtomSet::singleton(1)
        ));
        let amb2 = AtomTable::new(["a", "ab", "b", "c"]).unwrap();
        assert!(matches!(amb2.parse_key("abc"), Err(ModelError::AmbiguousSpaceKey(_))));
    }

    #[test]
    fn subsets_enumerate_powerset() {
        let s = AtomSet::from_bits(0b101);
        let subs: Vec<u32> = s.subsets().map(AtomSet::bits).collect();
        assert_eq!(subs, vec![0b000, 0b001, 0b100, 0b101]);
    }

    #[test]
    fn rejects_bad_names() {
        assert!(AtomTable::new(["1p"]).is_err());
        assert!(AtomTable::new(["p", "p"]).is_err());
        assert!(is_atom_name("p_1"));
        for reserved in ["T", "l_1", "a_x", "k_"] {
            assert!(!is_atom_name(reserved), "{reserved}");
        }
        assert!(is_atom_name("lab"));
    }
}
