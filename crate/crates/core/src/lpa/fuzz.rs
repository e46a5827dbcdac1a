//! Empirical soundness: random schema instances must be valid on random
//! models of every class, and the two rules must preserve validity.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atoms::AtomTable;
use crate::error::Result;
use crate::fh::category::{build_category, FhCategory};
use crate::genmodels::{gen_fh, gen_hms, gen_implicit, Caps};
use crate::lpa::schema::{instance, Substitution, SCHEMATA};
use crate::report::{Law, Report};
use crate::semantics::{fh_extension, EventModel, Events, Evaluator};
use crate::syntax::{Formula, Modality};

/// A model on which definedness-relative validity can be decided.
pub trait ValidityOracle {
    fn atoms(&self) -> &AtomTable;
    fn agent_names(&self) -> &[String];
    /// A place where `f` is defined and false, if any.
    fn counterexample(&self, f: &Formula) -> Result<Option<String>>;
}

/// A lattice model: `f` is defined at a state iff the state's space contains
/// the atoms of `f`.
pub struct LatticeOracle<'a, M: ?Sized>(pub &'a M);

impl<M: EventModel + ?Sized> ValidityOracle for LatticeOracle<'_, M> {
    fn atoms(&self) -> &AtomTable {
        self.0.lattice().atoms()
    }
    fn agent_names(&self) -> &[String] {
        self.0.agents()
    }
    fn counterexample(&self, f: &Formula) -> Result<Option<String>> {
        let l = self.0.lattice();
        let atoms = f.atom_set(l.atoms())?;
        let events = Events(self.0);
        let up = l.up_closure(&Evaluator::new(&events).eval(f)?);
        Ok((0..l.state_count())
            .find(|&s| atoms.is_subset(l.space_of(s)) && !up.contains(s))
            .map(|s| l.label(s)))
    }
}

/// A category: `f` must hold at every world of every model whose language
/// contains the atoms of `f`.
impl ValidityOracle for FhCategory {
    fn atoms(&self) -> &AtomTable {
        &self.universe
    }
    fn agent_names(&self) -> &[String] {
        &self.model(self.top).agents
    }
    fn counterexample(&self, f: &Formula) -> Result<Option<String>> {
        let atoms = f.atom_set(&self.universe)?;
        for psi in self.languages().filter(|psi| atoms.is_subset(*psi)) {
            let k = self.model(psi);
            let ext = fh_extension(k, f)?;
            if let Some(w) = (0..k.world_count()).find(|&w| !ext.contains(w)) {
                return Ok(Some(format!("world {} of the `{}` model", k.worlds[w], self.universe.key(psi))));
            }
        }
        Ok(None)
    }
}

/// A random formula of modal depth at most `depth` over `atoms` and `agents`.
pub fn random_formula(rng: &mut impl Rng, atoms: &[String], agents: &[String], depth: usize) -> Formula {
    fn go(rng: &mut impl Rng, atoms: &[String], agents: &[String], depth: usize, budget: usize) -> Formula {
        let leaf = budget == 0 || rng.gen_bool(0.3);
        if leaf {
            return match atoms.choose(rng) {
                Some(p) if rng.gen_bool(0.9) => Formula::atom(p.clone()),
                _ => Formula::Top,
            };
        }
        let choice = rng.gen_range(0..if depth > 0 { 4 } else { 2 });
        match choice {
            0 => Formula::not(go(rng, atoms, agents, depth, budget - 1)),
            1 => Formula::and(
                go(rng, atoms, agents, depth, budget / 2),
                go(rng, atoms, agents, depth, budget / 2),
            ),
            _ => {
                let m = *Modality::ALL.choose(rng).expect("three modalities");
                let i = agents.choose(rng).expect("at least one agent").clone();
                Formula::modal(m, i, go(rng, atoms, agents, depth - 1, budget - 1))
            }
        }
    }
    go(rng, atoms, agents, depth, 6)
}

fn random_substitution(rng: &mut impl Rng, atoms: &[String], agents: &[String], depth: usize) -> Substitution {
    let mut sub = Substitution::default();
    for v in ["phi", "psi"] {
        sub.formulas.insert(v.into(), random_formula(rng, atoms, agents, depth));
    }
    for v in ["i", "j"] {
        sub.agents.insert(v.into(), agents.choose(rng).expect("at least one agent").clone());
    }
    sub
}

/// Instance counts for one model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub schema_instances: usize,
    pub rule_applications: usize,
}

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        self.schema_instances += o.schema_instances;
        self.rule_applications += o.rule_applications;
    }
}

/// `per_schema` random instances of every schema, then necessitation on each
/// valid instance and modus ponens with a random consequent.
pub fn check_schemata(
    oracle: &(impl ValidityOracle + ?Sized),
    rng: &mut impl Rng,
    depth: usize,
    per_schema: usize,
    report: &mut Report,
) -> Result<Tally> {
    let atoms = oracle.atoms().names().to_vec();
    let agents = oracle.agent_names().to_vec();
    let mut tally = Tally::default();
    for (name, _) in SCHEMATA {
        for _ in 0..per_schema {
            let sub = random_substitution(rng, &atoms, &agents, depth);
            let inst = instance(name, &sub).expect("known schema");
            tally.schema_instances += 1;
            if let Some(at) = oracle.counterexample(&inst)? {
                report.push(Law::SchemaCounterexample, format!("{name}: {inst} fails at {at}"));
                continue;
            }
            let i = agents.choose(rng).expect("at least one agent").clone();
            let nec = Formula::implicit(i, inst.clone());
            tally.rule_applications += 1;
            if let Some(at) = oracle.counterexample(&nec)? {
                report.push(Law::RulePreservation, format!("nec: {inst} is valid but {nec} fails at {at}"));
            }
            let chi = random_formula(rng, &atoms, &agents, depth);
            let imp = Formula::implies(inst.clone(), chi.clone());
            if oracle.counterexample(&imp)?.is_none() {
                tally.rule_applications += 1;
                if let Some(at) = oracle.counterexample(&chi)? {
                    report.push(
                        Law::RulePreservation,
                        format!("mp: {inst} and {imp} are valid but {chi} fails at {at}"),
                    );
                }
            }
        }
    }
    Ok(tally)
}

/// The three model classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelClass {
    Category,
    Complemented,
    Implicit,
}

impl ModelClass {
    pub const ALL: [ModelClass; 3] = [ModelClass::Category, ModelClass::Complemented, ModelClass::Implicit];

    pub fn name(self) -> &'static str {
        match self {
            ModelClass::Category => "category",
            ModelClass::Complemented => "complemented",
            ModelClass::Implicit => "implicit",
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelClass {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ModelClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown model class `{s}` (expected category, complemented or implicit)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub trials: usize,
    pub depth: usize,
    pub seed: u64,
    pub caps: Caps,
    pub per_schema: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            trials: 200,
            depth: 2,
            seed: 0,
            caps: Caps::new(3, 5, 2),
            per_schema: 3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzOutcome {
    pub trials: usize,
    pub tally: Tally,
    pub report: Report,
}

/// Runs `cfg.trials` trials on models of `class`; trial `t` uses model seed
/// `cfg.seed + t`.
pub fn fuzz_soundness(class: ModelClass, cfg: &FuzzConfig) -> Result<FuzzOutcome> {
    let mut out = FuzzOutcome::default();
    for t in 0..cfg.trials {
        let seed = cfg.seed.wrapping_add(t as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f00d);
        let mut report = Report::new();
        let tally = match class {
            ModelClass::Category => {
                let c = build_category(&gen_fh(seed, cfg.caps)?, true)?;
                check_schemata(&c, &mut rng, cfg.depth, cfg.per_schema, &mut report)?
            }
            ModelClass::Complemented => {
                let m = gen_hms(seed, cfg.caps)?;
                check_schemata(&LatticeOracle(&m), &mut rng, cfg.depth, cfg.per_schema, &mut report)?
            }
            ModelClass::Implicit => {
                let d = gen_implicit(seed, cfg.caps)?.derive_pi_star()?;
                check_schemata(&LatticeOracle(&d), &mut rng, cfg.depth, cfg.per_schema, &mut report)?
            }
        };
        for v in report.violations {
            out.report.push(v.law, format!("{class} seed {seed}: {}", v.witness));
        }
        out.report.suppressed += report.suppressed;
        out.tally += tally;
        out.trials += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1l, fig1r};
    use crate::syntax::parse_any_agent;

    #[test]
    fn schemata_hold_on_the_fixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [fig1l(), fig1r()] {
            let mut report = Report::new();
            check_schemata(&LatticeOracle(&m), &mut rng, 2, 10, &mut report).unwrap();
            assert!(report.is_empty(), "{report}");
        }
    }

    #[test]
    fn truth_axiom_on_top_is_valid() {
        let m = fig1l();
        let f = parse_any_agent("l_1 T -> T").unwrap();
        assert_eq!(LatticeOracle(&m).counterexample(&f).unwrap(), None);
    }

    #[test]
    fn invalid_formulas_get_a_witness() {
        let m = fig1l();
        let f = parse_any_agent("a_1 q").unwrap();
        assert!(LatticeOracle(&m).counterexample(&f).unwrap().is_some());
    }

    #[test]
    fn short_fuzz_runs_clean_on_every_class() {
        let cfg = FuzzConfig {
            trials: 8,
            ..FuzzConfig::default()
        };
        for class in ModelClass::ALL {
            let out = fuzz_soundness(class, &cfg).unwrap();
            assert!(out.report.is_empty(), "{class}: {}", out.report);
            assert!(out.tally.schema_instances >= 8 * 12);
        }
    }

    #[test]
    fn random_formulas_respect_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let atoms = vec!["p".to_string(), "q".to_string()];
        let agents = vec!["1".to_string()];
        for _ in 0..200 {
            assert!(random_formula(&mut rng, &atoms, &agents, 2).modal_depth() <= 2);
        }
    }
}
