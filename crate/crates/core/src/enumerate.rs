//! Bounded enumeration of formulas, deduplicated by meaning.
//!
//! Two formulas with the same atoms and the same value in an interpretation
//! are interchangeable as subformulas, so only one representative of each
//! `(atoms, value)` signature is kept. Enumerating over a product
//! interpretation therefore finds a distinguishing formula whenever one
//! exists within the bounds.

use std::collections::HashSet;

use crate::atoms::AtomSet;
use crate::semantics::Interpretation;
use crate::syntax::{Formula, Modality};

/// Bounds for [`enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Maximum modal depth.
    pub depth: usize,
    /// Formulas per level used as conjuncts and as modal arguments.
    pub generator_cap: usize,
    /// Formulas kept per level.
    pub level_cap: usize,
}

impl EnumConfig {
    pub fn with_depth(depth: usize) -> Self {
        EnumConfig {
            depth,
            ..EnumConfig::default()
        }
    }
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            depth: 2,
            generator_cap: 48,
            level_cap: 1024,
        }
    }
}

/// One enumerated formula with its value and atoms.
#[derive(Clone, Debug)]
pub struct Enumerated<V> {
    pub formula: Formula,
    pub value: V,
    pub atoms: AtomSet,
    pub depth: usize,
}

struct Pool<'a, I: Interpretation + ?Sized> {
    interp: &'a I,
    seen: HashSet<(AtomSet, I::Value)>,
    out: Vec<Enumerated<I::Value>>,
}

impl<I: Interpretation + ?Sized> Pool<'_, I> {
    fn add(&mut self, formula: Formula, value: I::Value, atoms: AtomSet, depth: usize) -> Option<usize> {
        if !self.seen.insert((atoms, value.clone())) {
            return None;
        }
        self.out.push(Enumerated {
            formula,
            value,
            atoms,
            depth,
        });
        Some(self.out.len() - 1)
    }

    /// Negations of `gens`, pairwise conjunctions among the first
    /// `generator_cap` of `gens` and those negations, and the negations of
    /// the conjunctions.
    fn close(&mut self, gens: &[usize], depth: usize, cfg: &EnumConfig, budget: usize) {
        let start = self.out.len();
        let within = |p: &Self| p.out.len() - start < budget;
        let mut negs = Vec::new();
        for &g in gens {
            if !within(self) {
                return;
            }
            let e = &self.out[g];
            let (f, v, a) = (Formula::not(e.formula.clone()), self.interp.not(&e.value), e.atoms);
            negs.extend(self.add(f, v, a, depth));
        }
        // generators first, then their negations, so `p & ~p` is reachable
        let conj: Vec<usize> = gens.iter().chain(&negs).copied().take(cfg.generator_cap).collect();
        for (x, &g) in conj.iter().enumerate() {
            for &h in &conj[x + 1..] {
                if !within(self) {
                    return;
                }
                let (eg, eh) = (&self.out[g], &self.out[h]);
                let v = self.interp.and(&eg.value, &eh.value);
                let nv = self.interp.not(&v);
                let f = Formula::and(eg.formula.clone(), eh.formula.clone());
                let a = eg.atoms.union(eh.atoms);
                self.add(Formula::not(f.clone()), nv, a, depth);
                self.add(f, v, a, depth);
            }
        }
    }
}

/// Enumerates formulas over the sublanguage `language` up to the configured
/// modal depth, smallest first within each level. Formulas the
/// interpretation rejects are skipped.
pub fn enumerate<I: Interpretation + ?Sized>(interp: &I, language: AtomSet, cfg: &EnumConfig) -> Vec<Enumerated<I::Value>> {
    let mut pool = Pool {
        interp,
        seen: HashSet::new(),
        out: Vec::new(),
    };
    let mut gens = Vec::new();
    gens.extend(pool.add(Formula::Top, interp.top(), AtomSet::EMPTY, 0));
    for p in language.iter() {
        let name = interp.atom_table().name(p).to_string();
        gens.extend(pool.add(Formula::atom(name), interp.atom(p), AtomSet::singleton(p), 0));
    }
    pool.close(&gens, 0, cfg, cfg.level_cap);

    let agents = interp.agent_names().len();
    let mut lower: Vec<usize> = (0..pool.out.len()).collect();
    for d in 1..=cfg.depth {
        lower.sort_by_key(|&x| pool.out[x].formula.size());
        let args: Vec<usize> = lower.iter().copied().take(cfg.level_cap).collect();
        let level_start = pool.out.len();
        let mut modal = Vec::new();
        'outer: for &x in &args {
            for agent in 0..agents {
                for m in Modality::ALL {
                    if pool.out.len() - level_start >= cfg.level_cap {
                        break 'outer;
                    }
                    let e = &pool.out[x];
                    let Ok(v) = interp.modal(m, agent, &e.value, e.atoms) else {
                        continue;
                    };
                    let name = interp.agent_names()[agent].clone();
                    let f = Formula::modal(m, name, e.formula.clone());
                    let a = e.atoms;
                    modal.extend(pool.add(f, v, a, d));
                }
            }
        }
        // conjuncts mix the new modal formulas with the lower generators
        let mut gens: Vec<usize> = modal.clone();
        gens.extend(lower.iter().copied().take(cfg.generator_cap / 2));
        gens.sort_by_key(|&x| pool.out[x].formula.size());
        gens.dedup();
        let spent = pool.out.len() - level_start;
        pool.close(&gens, d, cfg, cfg.level_cap.saturating_sub(spent));
        lower = (level_start..pool.out.len()).collect();
        if lower.is_empty() {
            break;
        }
    }
    pool.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomTable;
    use crate::fh::model::{FhModel, WorldSet};

    fn model() -> FhModel {
        let at = AtomTable::new(["p", "q"]).unwrap();
        let mut all = WorldSet::with_capacity(2);
        all.insert_range(..);
        let mut vp = WorldSet::with_capacity(2);
        vp.insert(0);
        FhModel::new(
            at.clone(),
            at.full(),
            vec!["1".into()],
            vec!["w0".into(), "w1".into()],
            vec![vec![all.clone(), all]],
            vec![vec![AtomSet::singleton(0); 2]],
            vec![vp, WorldSet::with_capacity(2)],
        )
        .unwrap()
    }

    #[test]
    fn signatures_are_unique_and_formulas_stay_in_language() {
        let m = model();
        let out = enumerate(&m, AtomSet::singleton(0), &EnumConfig::with_depth(2));
        let mut seen = HashSet::new();
        for e in &out {
            assert!(seen.insert((e.atoms, e.value.clone())));
            assert!(e.formula.atoms().iter().all(|p| p == "p"));
            assert!(e.formula.modal_depth() <= 2);
        }
        // one cell: every modal formula collapses onto a boolean one
        assert!(out.iter().all(|e| e.depth == 0));
    }

    #[test]
    fn values_match_direct_evaluation() {
        let m = model();
        for e in enumerate(&m, m.language, &EnumConfig::with_depth(1)) {
            assert_eq!(crate::semantics::fh_extension(&m, &e.formula).unwrap(), e.value);
        }
    }
}
