//! Surjective bounded morphisms and categories of sublanguage models.

use std::collections::HashMap;

use crate::atoms::{AtomSet, AtomTable};
use crate::enumerate::{enumerate, EnumConfig};
use crate::error::{Error, ModelError, Result};
use crate::fh::model::{FhModel, WorldSet};
use crate::report::{Law, Report};
use crate::semantics::Product;

/// A world map from `K_Φ` to `K_Ψ`, `Ψ ⊆ Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: AtomSet,
    pub target: AtomSet,
    pub map: Vec<usize>,
}

/// The five clauses of a surjective bounded morphism, with awareness
/// consistency checked on atom sets.
pub fn check_bounded_morphism(src: &FhModel, dst: &FhModel, map: &[usize]) -> Result<Report, ModelError> {
    if !dst.language.is_subset(src.language) {
        return Err(ModelError::Malformed(format!(
            "target language `{}` is not below source language `{}`",
            dst.language_key(),
            src.language_key()
        )));
    }
    if map.len() != src.world_count() || map.iter().any(|&t| t >= dst.world_count()) {
        return Err(ModelError::IncompleteMap("morphism".into()));
    }
    if src.agents != dst.agents {
        return Err(ModelError::Malformed("models have different agents".into()));
    }
    let mut report = Report::new();
    let mut hit = dst.empty_set();
    for &t in map {
        hit.insert(t);
    }
    for t in 0..dst.world_count() {
        report.check(hit.contains(t), Law::Surjectivity, || format!("{} is not hit", dst.worlds[t]));
    }
    let psi = dst.language;
    for (w, &fw) in map.iter().enumerate() {
        for p in psi.iter() {
            report.check(src.valuation[p].contains(w) == dst.valuation[p].contains(fw), Law::AtomicHarmony, || {
                format!("({}, {}) under {} ↦ {}", src.worlds[w], src.universe.name(p), src.worlds[w], dst.worlds[fw])
            });
        }
        for (i, agent) in src.agents.iter().enumerate() {
            let lhs = src.awareness[i][w].intersection(psi);
            let rhs = dst.awareness[i][fw];
            report.check(lhs == rhs, Law::AwarenessConsistency, || {
                format!(
                    "agent {agent}: awareness at {} cut to `{}` is {:?} but at {} it is {:?}",
                    src.worlds[w],
                    dst.language_key(),
                    src.universe.names_of(lhs),
                    dst.worlds[fw],
                    dst.universe.names_of(rhs)
                )
            });
            for t in src.relations[i][w].ones() {
                report.check(dst.relations[i][fw].contains(map[t]), Law::Homomorphism, || {
                    format!(
                        "agent {agent}: ({}, {}) ∈ R but ({}, {}) ∉ R'",
                        src.worlds[w], src.worlds[t], dst.worlds[fw], dst.worlds[map[t]]
                    )
                });
            }
            for u in dst.relations[i][fw].ones() {
                let back = src.relations[i][w].ones().any(|t| map[t] == u);
                report.check(back, Law::Back, || {
                    format!(
                        "agent {agent}: ({}, {}) ∈ R' has no preimage step from {}",
                        dst.worlds[fw], dst.worlds[u], src.worlds[w]
                    )
                });
            }
        }
    }
    Ok(report)
}

/// One model per sublanguage `Ψ ⊆ Φ` and one morphism per pair `Ψ′ ⊆ Φ′`.
#[derive(Clone, Debug)]
pub struct FhCategory {
    pub universe: AtomTable,
    pub top: AtomSet,
    /// Indexed by `AtomSet::index`; `None` outside the subsets of `top`.
    pub models: Vec<Option<FhModel>>,
    pub morphisms: HashMap<(AtomSet, AtomSet), Morphism>,
}

impl FhCategory {
    pub fn model(&self, phi: AtomSet) -> &FhModel {
        self.models[phi.index()].as_ref().expect("sublanguage of the category")
    }

    pub fn morphism(&self, from: AtomSet, to: AtomSet) -> &Morphism {
        &self.morphisms[&(from, to)]
    }

    pub fn languages(&self) -> impl Iterator<Item = AtomSet> {
        self.top.subsets()
    }

    /// Every model validates, every morphism is a surjective bounded
    /// morphism, and the identity and composition laws hold.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for phi in self.languages() {
            report.extend(self.model(phi).validate());
        }
        for phi in self.languages() {
            for psi in phi.subsets() {
                let f = self.morphism(phi, psi);
                match check_bounded_morphism(self.model(phi), self.model(psi), &f.map) {
                    Ok(r) => report.extend(r),
                    Err(e) => report.push(Law::Surjectivity, format!("{} -> {}: {e}", self.key(phi), self.key(psi))),
                }
                if phi == psi {
                    report.check(f.map.iter().enumerate().all(|(w, &t)| w == t), Law::MorphismIdentity, || {
                        format!("f^{0}_{0} is not the identity", self.key(phi))
                    });
                }
                for ups in psi.subsets() {
                    let direct = &self.morphism(phi, ups).map;
                    let g = &self.morphism(psi, ups).map;
                    let composed: Vec<usize> = f.map.iter().map(|&x| g[x]).collect();
                    report.check(&composed == direct, Law::MorphismComposition, || {
                        format!(
                            "f^{}_{} differs from f^{}_{} ∘ f^{}_{}",
                            self.key(phi),
                            self.key(ups),
                            self.key(psi),
                            self.key(ups),
                            self.key(phi),
                            self.key(psi)
                        )
                    });
                }
            }
        }
        report
    }

    fn key(&self, s: AtomSet) -> String {
        format!("{{{}}}", self.universe.key(s))
    }
}

/// Builds the category of `k`: every sublanguage model is a copy of `k`
/// with valuation and awareness cut down, and every morphism is the
/// identity on worlds. With `minimize`, every proper sublanguage model is
/// quotiented by bisimilarity relative to its language; worlds of a quotient
/// are named after their first member.
pub fn build_category(k: &FhModel, minimize: bool) -> Result<FhCategory> {
    let pre = k.validate();
    if !pre.is_empty() {
        return Err(Error::PreconditionFailed(pre));
    }
    let n = 1usize << k.universe.len();
    let mut models = vec![None; n];
    // classes[Ψ][w] is the world of K_Ψ that top-level world w becomes
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for psi in k.language.subsets() {
        let restricted = k.restrict(psi);
        let (model, class) = if minimize && psi != k.language {
            quotient(&restricted)
        } else {
            let id = (0..k.world_count()).collect();
            (restricted, id)
        };
        models[psi.index()] = Some(model);
        classes[psi.index()] = class;
    }
    let mut morphisms = HashMap::new();
    for phi in k.language.subsets() {
        for psi in phi.subsets() {
            let src = models[phi.index()].as_ref().expect("built");
            let mut map = vec![0; src.world_count()];
            for w in 0..k.world_count() {
                map[classes[phi.index()][w]] = classes[psi.index()][w];
            }
            morphisms.insert(
                (phi, psi),
                Morphism {
                    source: phi,
                    target: psi,
                    map,
                },
            );
        }
    }
    Ok(FhCategory {
        universe: k.universe.clone(),
        top: k.language,
        models,
        morphisms,
    })
}

/// Coarsest partition of worlds that respects valuation and awareness on the
/// model's language and is stable under every relation.
pub fn bisimulation_classes(k: &FhModel) -> Vec<usize> {
    let n = k.world_count();
    let mut class: Vec<usize> = vec![0; n];
    let mut sigs: HashMap<Vec<u64>, usize> = HashMap::new();
    for w in 0..n {
        let mut sig: Vec<u64> = k
            .language
            .iter()
            .map(|p| k.valuation[p].contains(w) as u64)
            .collect();
        sig.extend(k.awareness.iter().map(|row| row[w].bits() as u64));
        let next = sigs.len();
        class[w] = *sigs.entry(sig).or_insert(next);
    }
    loop {
        let mut sigs: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut next_class = vec![0; n];
        for w in 0..n {
            let mut sig = vec![class[w] as u64];
            for rel in &k.relations {
                let mut reach: Vec<u64> = rel[w].ones().map(|t| class[t] as u64).collect();
                reach.sort_unstable();
                reach.dedup();
                sig.push(u64::MAX);
                sig.extend(reach);
            }
            let fresh = sigs.len();
            next_class[w] = *sigs.entry(sig).or_insert(fresh);
        }
        let stable = sigs.len() == class.iter().collect::<std::collections::HashSet<_>>().len();
        class = next_class;
        if stable {
            return class;
        }
    }
}

fn quotient(k: &FhModel) -> (FhModel, Vec<usize>) {
    let class = bisimulation_classes(k);
    let count = class.iter().max().map_or(0, |m| m + 1);
    let mut rep = vec![usize::MAX; count];
    for (w, &c) in class.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = w;
        }
    }
    let worlds: Vec<String> = rep.iter().map(|&w| k.worlds[w].clone()).collect();
    let relations = k
        .relations
        .iter()
        .map(|rel| {
            rep.iter()
                .map(|&w| {
                    let mut s = WorldSet::with_capacity(count);
                    for t in rel[w].ones() {
                        s.insert(class[t]);
                    }
                    s
                })
                .collect()
        })
        .collect();
    let awareness = k
        .awareness
        .iter()
        .map(|row| rep.iter().map(|&w| row[w]).collect())
        .collect();
    let valuation = k
        .valuation
        .iter()
        .map(|v| {
            let mut s = WorldSet::with_capacity(count);
            for (c, &w) in rep.iter().enumerate() {
                if v.contains(w) {
                    s.insert(c);
                }
            }
            s
        })
        .collect();
    let model = FhModel::new(
        k.universe.clone(),
        k.language,
        k.agents.clone(),
        worlds,
        relations,
        awareness,
        valuation,
    )
    .expect("quotient keeps shapes");
    (model, class)
}

/// Outcome of comparing each morphism's source and target on the target's
/// sublanguage.
#[derive(Clone, Debug, Default)]
pub struct AgreementTable {
    /// `(Φ, Ψ)` for which some enumerated formula of `L_Ψ` disagrees.
    pub failing: HashMap<(AtomSet, AtomSet), String>,
}

impl AgreementTable {
    pub fn agrees(&self, phi: AtomSet, psi: AtomSet) -> bool {
        !self.failing.contains_key(&(phi, psi))
    }
}

/// Checks `K_Φ, w ⊩ φ ⟺ K_Ψ, f(w) ⊩ φ` for every morphism and every
/// enumerated `φ ∈ L_Ψ`; all models above one `Ψ` are enumerated together.
pub fn agreement_table(c: &FhCategory, cfg: &EnumConfig, report: &mut Report) -> AgreementTable {
    let mut table = AgreementTable::default();
    for psi in c.languages() {
        let above: Vec<AtomSet> = c.languages().filter(|phi| psi.is_subset(*phi)).collect();
        let product = Product(above.iter().map(|&phi| c.model(phi)).collect::<Vec<_>>());
        let target = above.iter().position(|&phi| phi == psi).expect("Ψ ⊆ Ψ");
        for e in enumerate(&product, psi, cfg) {
            for (x, &phi) in above.iter().enumerate() {
                if table.failing.contains_key(&(phi, psi)) {
                    continue;
                }
                let map = &c.morphism(phi, psi).map;
                let (src, dst) = (&e.value[x], &e.value[target]);
                if let Some(w) = (0..map.len()).find(|&w| src.contains(w) != dst.contains(map[w])) {
                    let witness = format!(
                        "{} at {} in {{{}}} vs {} in {{{}}}",
                        e.formula,
                        c.model(phi).worlds[w],
                        c.universe.key(phi),
                        c.model(psi).worlds[map[w]],
                        c.universe.key(psi)
                    );
                    report.push(Law::SublanguageInvariance, witness.clone());
                    table.failing.insert((phi, psi), witness);
                }
            }
        }
    }
    table
}

/// Invariance across every morphism, then the join and meet equivalences for
/// every nonempty family of sublanguages (sampled above four atoms).
pub fn category_equivalence_suite(c: &FhCategory, cfg: &EnumConfig) -> Report {
    let mut report = Report::new();
    let table = agreement_table(c, cfg, &mut report);
    let langs: Vec<AtomSet> = c.languages().collect();
    let check_family = |fam: &[AtomSet], report: &mut Report| {
        let join = fam.iter().fold(AtomSet::EMPTY, |a, &b| a.union(b));
        let meet = fam[1..].iter().fold(fam[0], |a, &b| a.intersection(b));
        for &psi in fam {
            report.check(table.agrees(join, psi), Law::JoinEquivalence, || {
                format!("join {{{}}} vs {{{}}}", c.universe.key(join), c.universe.key(psi))
            });
            report.check(table.agrees(psi, meet), Law::MeetEquivalence, || {
                format!("{{{}}} vs meet {{{}}}", c.universe.key(psi), c.universe.key(meet))
            });
        }
    };
    if c.top.len() <= 4 {
        let count = langs.len();
        for mask in 1u64..(1u64 << count) {
            let fam: Vec<AtomSet> = (0..count).filter(|b| mask >> b & 1 == 1).map(|b| langs[b]).collect();
            check_family(&fam, &mut report);
        }
    } else {
        // Deterministic sample: all singletons and pairs plus strided larger families.
        let count = langs.len();
        for a in 0..count {
            for b in a..count {
                check_family(&[langs[a], langs[b]], &mut report);
            }
        }
        for stride in 2..count {
            let fam: Vec<AtomSet> = langs.iter().copied().step_by(stride).collect();
            check_family(&fam, &mut report);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell_model() -> FhModel {
        let at = AtomTable::new(["p", "q"]).unwrap();
        let n = 4;
        let mut rel = Vec::new();
        for w in 0..n {
            let mut s = WorldSet::with_capacity(n);
            s.insert(w);
            rel.push(s);
        }
        let mut vp = WorldSet::with_capacity(n);
        vp.insert(0);
        vp.insert(1);
        let mut vq = WorldSet::with_capacity(n);
        vq.insert(0);
        vq.insert(2);
        FhModel::new(
            at.clone(),
            at.full(),
            vec!["1".into()],
            ["pq", "p~q", "~pq", "~p~q"].iter().map(|s| s.to_string()).collect(),
            vec![rel],
            vec![vec![AtomSet::singleton(0); n]],
            vec![vp, vq],
        )
        .unwrap()
    }

    #[test]
    fn identity_category_is_valid() {
        let c = build_category(&cell_model(), false).unwrap();
        assert_eq!(c.languages().count(), 4);
        assert!(c.validate().is_empty(), "{}", c.validate());
    }

    #[test]
    fn minimized_category_is_valid_and_smaller() {
        let c = build_category(&cell_model(), true).unwrap();
        assert!(c.validate().is_empty(), "{}", c.validate());
        assert_eq!(c.model(AtomSet::singleton(0)).world_count(), 2);
        assert_eq!(c.model(AtomSet::EMPTY).world_count(), 1);
        assert_eq!(c.model(c.top).world_count(), 4);
    }

    #[test]
    fn equivalence_suite_passes_on_both_constructions() {
        for minimize in [false, true] {
            let c = build_category(&cell_model(), minimize).unwrap();
            let r = category_equivalence_suite(&c, &EnumConfig::with_depth(2));
            assert!(r.is_empty(), "{r}");
        }
    }

    #[test]
    fn non_surjective_map_is_reported() {
        let k = cell_model();
        let r = check_bounded_morphism(&k, &k, &[0, 0, 2, 3]).unwrap();
        assert!(r.has(Law::Surjectivity));
    }

    #[test]
    fn broken_harmony_names_world_and_atom() {
        let k = cell_model();
        let r = check_bounded_morphism(&k, &k, &[1, 0, 2, 3]).unwrap();
        assert!(r.first(Law::AtomicHarmony).unwrap().witness.contains("pq"));
    }
}
