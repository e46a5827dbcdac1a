//! JSON model files.
//!
//! Lattice models (plain, complemented and implicit-knowledge-based) share one
//! layout; the optional `lambda`, `lambda_star` and `alpha` fields select the
//! variant. Awareness structures are recognised by their `worlds` field. The
//! field-by-field schema lives in `docs/formats.md`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::atoms::{AtomSet, AtomTable};
use crate::error::{ModelError, Result};
use crate::fh::model::{FhModel, WorldSet};
use crate::hms::lattice::{Lattice, StateSet};
use crate::hms::model::{Correspondence, Frame, HmsModel};
use crate::implicit::{ComplementedModel, ImplicitModel};
use crate::report::Report;
use crate::semantics::{fh_extension, truth_table, TruthValue};
use crate::syntax::parse;

/// `agent -> state -> [state]`, states written `key:id`.
pub type CorrespondenceTable = BTreeMap<String, BTreeMap<String, Vec<String>>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationEntry {
    pub base_space: String,
    pub base: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HmsFile {
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
    /// Space key to state ids, in a fixed order.
    pub spaces: BTreeMap<String, Vec<String>>,
    /// `"Φ->Ψ"` for covering pairs, mapping source id to target id.
    pub projections: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<CorrespondenceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<CorrespondenceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<CorrespondenceTable>,
    /// `agent -> state -> space key`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<BTreeMap<String, BTreeMap<String, String>>>,
    pub valuation: BTreeMap<String, ValuationEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FhFile {
    /// The model language.
    pub atoms: Vec<String>,
    /// The atom universe when it is larger than the language.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<Vec<String>>,
    pub agents: Vec<String>,
    pub worlds: Vec<String>,
    /// `agent -> [[w, t]]`, the pairs of `R_i`.
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    /// `agent -> world -> [atom]`.
    pub awareness: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    /// `atom -> [world]`.
    pub valuation: BTreeMap<String, Vec<String>>,
}

/// A model of any supported family.
#[derive(Clone, Debug)]
pub enum AnyModel {
    Fh(FhModel),
    Hms(HmsModel),
    Complemented(ComplementedModel),
    Implicit(ImplicitModel),
}

impl AnyModel {
    pub fn family(&self) -> &'static str {
        match self {
            AnyModel::Fh(_) => "fh",
            AnyModel::Hms(_) => "hms",
            AnyModel::Complemented(_) => "complemented-hms",
            AnyModel::Implicit(_) => "implicit-hms",
        }
    }

    pub fn agents(&self) -> &[String] {
        match self {
            AnyModel::Fh(k) => &k.agents,
            AnyModel::Hms(h) => &h.frame.agents,
            AnyModel::Complemented(c) => &c.base.frame.agents,
            AnyModel::Implicit(im) => &im.frame.agents,
        }
    }

    /// Structural validation for the model's family.
    pub fn validate(&self) -> Report {
        match self {
            AnyModel::Fh(k) => k.validate(),
            AnyModel::Hms(h) => h.validate(),
            AnyModel::Complemented(c) => c.validate(),
            AnyModel::Implicit(im) => im.validate(),
        }
    }

    fn lattice(&self) -> Option<&Lattice> {
        match self {
            AnyModel::Fh(_) => None,
            AnyModel::Hms(h) => Some(h.lattice()),
            AnyModel::Complemented(c) => Some(c.lattice()),
            AnyModel::Implicit(im) => Some(im.lattice()),
        }
    }

    /// World names, or `key:id` labels in global state order.
    pub fn state_labels(&self) -> Vec<String> {
        match (self, self.lattice()) {
            (AnyModel::Fh(k), _) => k.worlds.clone(),
            (_, Some(l)) => (0..l.state_count()).map(|s| l.label(s)).collect(),
            (_, None) => unreachable!("every lattice family has a lattice"),
        }
    }

    /// Index of a state given as a world name or as `key:id`.
    pub fn state_index(&self, text: &str) -> Result<usize> {
        match (self, self.lattice()) {
            (AnyModel::Fh(k), _) => k.world_index(text).ok_or_else(|| ModelError::UnknownState(text.into()).into()),
            (_, Some(l)) => Ok(l.parse_state(text)?),
            (_, None) => unreachable!("every lattice family has a lattice"),
        }
    }

    /// The value of `formula` at every state, in [`AnyModel::state_labels`]
    /// order. Implicit-knowledge-based models are evaluated through their
    /// derived explicit correspondence.
    pub fn evaluate(&self, formula: &str) -> Result<Vec<TruthValue>> {
        let f = parse(formula, self.agents())?;
        Ok(match self {
            AnyModel::Fh(k) => {
                let ext = fh_extension(k, &f)?;
                (0..k.world_count()).map(|w| ext.contains(w).into()).collect()
            }
            AnyModel::Hms(h) => truth_table(h, &f)?,
            AnyModel::Complemented(c) => truth_table(c, &f)?,
            AnyModel::Implicit(im) => truth_table(&im.derive_pi_star()?, &f)?,
        })
    }

    pub fn evaluate_at(&self, formula: &str, state: &str) -> Result<TruthValue> {
        let s = self.state_index(state)?;
        Ok(self.evaluate(formula)?[s])
    }
}

fn malformed(msg: impl Into<String>) -> ModelError {
    ModelError::Malformed(msg.into())
}

/// Parses a model file of any family.
pub fn parse_model(text: &str) -> Result<AnyModel> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let is_fh = value.get("worlds").is_some();
    if is_fh {
        let file: FhFile = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
        Ok(AnyModel::Fh(fh_from_file(&file)?))
    } else {
        let file: HmsFile = serde_json::from_value(value).map_err(|e| malformed(e.to_string()))?;
        hms_from_file(&file)
    }
}

pub fn load_model(path: &Path) -> Result<AnyModel> {
    let text = fs::read_to_string(path).map_err(|e| ModelError::Io(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

/// Pretty-printed JSON for any model.
pub fn render_model(m: &AnyModel) -> String {
    let value = match m {
        AnyModel::Fh(k) => serde_json::to_value(fh_to_file(k)),
        AnyModel::Hms(h) => serde_json::to_value(hms_to_file(&h.frame, Some(&h.pi), None, None, None)),
        AnyModel::Complemented(c) => serde_json::to_value(hms_to_file(
            &c.base.frame,
            Some(&c.base.pi),
            Some(&c.lambda),
            None,
            None,
        )),
        AnyModel::Implicit(im) => serde_json::to_value(hms_to_file(
            &im.frame,
            None,
            None,
            Some(&im.lambda_star),
            Some(&im.alpha),
        )),
    }
    .expect("model files serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("model files serialize");
    s.push('\n');
    s
}

pub fn save_model(path: &Path, m: &AnyModel) -> Result<()> {
    fs::write(path, render_model(m)).map_err(|e| ModelError::Io(format!("{}: {e}", path.display())).into())
}

fn agents_of(names: &[String]) -> Result<Vec<String>, ModelError> {
    if names.is_empty() {
        return Err(ModelError::NoAgents);
    }
    Ok(names.to_vec())
}

fn hms_from_file(f: &HmsFile) -> Result<AnyModel> {
    let atoms = AtomTable::new(f.atoms.iter().cloned())?;
    let n = 1usize << atoms.len();
    let mut space_states: Vec<Option<Vec<String>>> = vec![None; n];
    for (key, states) in &f.spaces {
        let set = atoms.parse_key(key)?;
        if space_states[set.index()].replace(states.clone()).is_some() {
            return Err(ModelError::Duplicate(format!("space `{key}`")).into());
        }
    }
    let space_states: Vec<Vec<String>> = space_states
        .into_iter()
        .enumerate()
        .map(|(b, s)| s.ok_or_else(|| ModelError::Missing(format!("space `{}`", atoms.key(AtomSet::from_bits(b as u32))))))
        .collect::<Result<_, _>>()?;

    let mut covers = HashMap::new();
    for (key, map) in &f.projections {
        let (from, to) = key
            .split_once("->")
            .ok_or_else(|| malformed(format!("projection key `{key}` is not of the form `Φ->Ψ`")))?;
        let (from, to) = (atoms.parse_key(from)?, atoms.parse_key(to)?);
        let diff = from.difference(to);
        if !to.is_subset(from) || diff.len() != 1 {
            return Err(ModelError::NotCovering(key.clone()).into());
        }
        let x = diff.iter().next().expect("one atom");
        let src = &space_states[from.index()];
        let dst = &space_states[to.index()];
        let mut out = Vec::with_capacity(src.len());
        for id in src {
            let target = map.get(id).ok_or_else(|| ModelError::IncompleteMap(key.clone()))?;
            let j = dst
                .iter()
                .position(|t| t == target)
                .ok_or_else(|| ModelError::UnknownState(format!("{}:{target}", atoms.key(to))))?;
            out.push(j);
        }
        if map.len() != src.len() {
            return Err(malformed(format!("projection `{key}` names states outside its source space")).into());
        }
        if covers.insert((from, x), out).is_some() {
            return Err(ModelError::Duplicate(format!("projection `{key}`")).into());
        }
    }
    let lattice = Lattice::new(atoms.clone(), space_states, covers)?;
    let agents = agents_of(&f.agents)?;

    let mut valuation = Vec::with_capacity(atoms.len());
    for p in atoms.names() {
        let entry = f.valuation.get(p).ok_or_else(|| ModelError::Missing(format!("valuation of `{p}`")))?;
        let space = atoms.parse_key(&entry.base_space)?;
        let mut base = lattice.empty_set();
        for id in &entry.base {
            let s = lattice
                .find_state(space, id)
                .ok_or_else(|| ModelError::UnknownState(format!("{}:{id}", entry.base_space)))?;
            base.insert(s);
        }
        valuation.push(lattice.event(space, base)?);
    }
    if let Some(extra) = f.valuation.keys().find(|a| atoms.index_of(a).is_none()) {
        return Err(ModelError::UnknownAtom(extra.clone()).into());
    }
    let table = |t: &CorrespondenceTable, what: &str| read_correspondences(&lattice, &agents, t, what);

    let model = if f.lambda_star.is_some() || f.alpha.is_some() {
        if f.pi.is_some() || f.lambda.is_some() {
            return Err(malformed("`lambda_star`/`alpha` cannot be combined with `pi`/`lambda`").into());
        }
        let ls = f.lambda_star.as_ref().ok_or_else(|| ModelError::Missing("lambda_star".into()))?;
        let al = f.alpha.as_ref().ok_or_else(|| ModelError::Missing("alpha".into()))?;
        let lambda_star = table(ls, "lambda_star")?;
        let alpha = read_alpha(&lattice, &agents, al)?;
        let frame = Frame::new(lattice, agents, valuation)?;
        AnyModel::Implicit(ImplicitModel::new(frame, lambda_star, alpha)?)
    } else {
        let pi_t = f.pi.as_ref().ok_or_else(|| ModelError::Missing("pi".into()))?;
        let pi = table(pi_t, "pi")?;
        let lambda = f.lambda.as_ref().map(|t| table(t, "lambda")).transpose()?;
        let frame = Frame::new(lattice, agents, valuation)?;
        let base = HmsModel::new(frame, pi)?;
        match lambda {
            Some(lambda) => AnyModel::Complemented(ComplementedModel::new(base, lambda)?),
            None => AnyModel::Hms(base),
        }
    };
    Ok(model)
}

fn check_agent_keys<V>(agents: &[String], map: &BTreeMap<String, V>, what: &str) -> Result<(), ModelError> {
    if let Some(a) = map.keys().find(|a| !agents.contains(a)) {
        return Err(ModelError::UnknownAgent(a.clone()));
    }
    if let Some(a) = agents.iter().find(|a| !map.contains_key(*a)) {
        return Err(ModelError::Missing(format!("{what} for agent `{a}`")));
    }
    Ok(())
}

fn read_correspondences(
    l: &Lattice,
    agents: &[String],
    t: &CorrespondenceTable,
    what: &str,
) -> Result<Vec<Correspondence>, ModelError> {
    check_agent_keys(agents, t, what)?;
    agents
        .iter()
        .map(|a| {
            let rows = &t[a];
            let mut images = vec![None; l.state_count()];
            for (state, targets) in rows {
                let s = l.parse_state(state)?;
                let mut img = l.empty_set();
                for target in targets {
                    img.insert(l.parse_state(target)?);
                }
                if images[s].replace(img).is_some() {
                    return Err(ModelError::Duplicate(format!("{what} entry for `{state}`")));
                }
            }
            let images: Vec<StateSet> = images
                .into_iter()
                .enumerate()
                .map(|(s, img)| img.ok_or_else(|| ModelError::IncompleteMap(format!("{what} of agent {a} at {}", l.label(s)))))
                .collect::<Result<_, _>>()?;
            Correspondence::new(l, images, what)
        })
        .collect()
}

fn read_alpha(
    l: &Lattice,
    agents: &[String],
    t: &BTreeMap<String, BTreeMap<String, String>>,
) -> Result<Vec<Vec<AtomSet>>, ModelError> {
    check_agent_keys(agents, t, "alpha")?;
    agents
        .iter()
        .map(|a| {
            let mut row = vec![None; l.state_count()];
            for (state, key) in &t[a] {
                let s = l.parse_state(state)?;
                row[s] = Some(l.atoms().parse_key(key)?);
            }
            row.into_iter()
                .enumerate()
                .map(|(s, v)| v.ok_or_else(|| ModelError::IncompleteMap(format!("alpha of agent {a} at {}", l.label(s)))))
                .collect()
        })
        .collect()
}

fn write_correspondences(l: &Lattice, agents: &[String], corrs: &[Correspondence]) -> CorrespondenceTable {
    agents
        .iter()
        .zip(corrs)
        .map(|(a, c)| {
            let rows = (0..l.state_count())
                .map(|s| (l.label(s), c.image(s).ones().map(|t| l.label(t)).collect()))
                .collect();
            (a.clone(), rows)
        })
        .collect()
}

fn hms_to_file(
    frame: &Frame,
    pi: Option<&[Correspondence]>,
    lambda: Option<&[Correspondence]>,
    lambda_star: Option<&[Correspondence]>,
    alpha: Option<&[Vec<AtomSet>]>,
) -> HmsFile {
    let l = &frame.lattice;
    let atoms = l.atoms();
    let spaces = l.space_indices().map(|sp| (l.key(sp), l.space_names(sp).to_vec())).collect();
    let mut projections = BTreeMap::new();
    for from in l.space_indices() {
        for x in from.iter() {
            let to = from.remove(x);
            let map = l.cover_map(from, x).expect("covering pair");
            let names = l.space_names(to);
            let entry = l
                .space_names(from)
                .iter()
                .zip(map)
                .map(|(src, &j)| (src.clone(), names[j].clone()))
                .collect();
            projections.insert(format!("{}->{}", l.key(from), l.key(to)), entry);
        }
    }
    let valuation = (0..atoms.len())
        .map(|p| {
            let e = &frame.valuation[p];
            let base = e.base().ones().map(|s| l.state_name(s).to_string()).collect();
            (
                atoms.name(p).to_string(),
                ValuationEntry {
                    base_space: l.key(e.space()),
                    base,
                },
            )
        })
        .collect();
    let agents = &frame.agents;
    HmsFile {
        atoms: atoms.names().to_vec(),
        agents: agents.clone(),
        spaces,
        projections,
        pi: pi.map(|c| write_correspondences(l, agents, c)),
        lambda: lambda.map(|c| write_correspondences(l, agents, c)),
        lambda_star: lambda_star.map(|c| write_correspondences(l, agents, c)),
        alpha: alpha.map(|al| {
            agents
                .iter()
                .zip(al)
                .map(|(a, row)| (a.clone(), (0..l.state_count()).map(|s| (l.label(s), l.key(row[s]))).collect()))
                .collect()
        }),
        valuation,
    }
}

fn fh_from_file(f: &FhFile) -> Result<FhModel> {
    let universe = AtomTable::new(f.universe.as_ref().unwrap_or(&f.atoms).iter().cloned())?;
    let language = universe.set_of(&f.atoms)?;
    let agents = agents_of(&f.agents)?;
    let n = f.worlds.len();
    let index: HashMap<&str, usize> = f.worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    let world = |w: &str| index.get(w).copied().ok_or_else(|| ModelError::UnknownState(w.to_string()));

    check_agent_keys(&agents, &f.relations, "relations")?;
    check_agent_keys(&agents, &f.awareness, "awareness")?;
    let mut relations = Vec::with_capacity(agents.len());
    let mut awareness = Vec::with_capacity(agents.len());
    for a in &agents {
        let mut rows = vec![WorldSet::with_capacity(n); n];
        for (w, t) in &f.relations[a] {
            rows[world(w)?].insert(world(t)?);
        }
        relations.push(rows);
        let mut aw = vec![None; n];
        for (w, names) in &f.awareness[a] {
            aw[world(w)?] = Some(universe.set_of(names)?);
        }
        let aw: Vec<AtomSet> = aw
            .into_iter()
            .enumerate()
            .map(|(w, v)| v.ok_or_else(|| ModelError::Missing(format!("awareness of agent {a} at world {}", f.worlds[w]))))
            .collect::<Result<_, _>>()?;
        awareness.push(aw);
    }
    let mut valuation = vec![WorldSet::with_capacity(n); universe.len()];
    for (p, ws) in &f.valuation {
        let i = universe.index_of(p).ok_or_else(|| ModelError::UnknownAtom(p.clone()))?;
        for w in ws {
            valuation[i].insert(world(w)?);
        }
    }
    Ok(FhModel::new(universe, language, agents, f.worlds.clone(), relations, awareness, valuation)?)
}

pub fn fh_to_file(k: &FhModel) -> FhFile {
    let names = |set: &WorldSet| -> Vec<String> { set.ones().map(|w| k.worlds[w].clone()).collect() };
    let relations = k
        .agents
        .iter()
        .zip(&k.relations)
        .map(|(a, rows)| {
            let pairs = rows
                .iter()
                .enumerate()
                .flat_map(|(w, row)| row.ones().map(move |t| (k.worlds[w].clone(), k.worlds[t].clone())))
                .collect();
            (a.clone(), pairs)
        })
        .collect();
    let awareness = k
        .agents
        .iter()
        .zip(&k.awareness)
        .map(|(a, row)| {
            let m = k.worlds.iter().zip(row).map(|(w, &set)| (w.clone(), k.universe.names_of(set))).collect();
            (a.clone(), m)
        })
        .collect();
    let valuation = k
        .language
        .iter()
        .map(|p| (k.universe.name(p).to_string(), names(&k.valuation[p])))
        .collect();
    FhFile {
        atoms: k.universe.names_of(k.language),
        universe: (k.language != k.universe.full()).then(|| k.universe.names().to_vec()),
        agents: k.agents.clone(),
        worlds: k.worlds.clone(),
        relations,
        awareness,
        valuation,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub source: String,
    pub target: String,
    /// Source world to target world.
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryManifest {
    pub universe: Vec<String>,
    /// Sublanguage key to model file name.
    pub models: BTreeMap<String, String>,
    pub morphisms: Vec<MorphismEntry>,
}

fn file_stem(key: &str) -> String {
    if key.is_empty() {
        "empty".to_string()
    } else {
        key.replace(',', "_")
    }
}

/// Writes one model file per sublanguage and a `category.json` manifest with
/// the covering morphisms.
pub fn dump_category(c: &crate::fh::FhCategory, dir: &Path) -> Result<()> {
    let io = |e: std::io::Error| ModelError::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut models = BTreeMap::new();
    let mut morphisms = Vec::new();
    for phi in c.languages() {
        let key = c.universe.key(phi);
        let name = format!("{}.model", file_stem(&key));
        save_model(&dir.join(&name), &AnyModel::Fh(c.model(phi).clone()))?;
        models.insert(key, name);
        for x in phi.iter() {
            let psi = phi.remove(x);
            let m = c.morphism(phi, psi);
            let (src, dst) = (c.model(phi), c.model(psi));
            morphisms.push(MorphismEntry {
                source: c.universe.key(phi),
                target: c.universe.key(psi),
                map: m.map.iter().enumerate().map(|(w, &t)| (src.worlds[w].clone(), dst.worlds[t].clone())).collect(),
            });
        }
    }
    let manifest = CategoryManifest {
        universe: c.universe.names().to_vec(),
        models,
        morphisms,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("category.json"), text + "\n").map_err(io)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY_HMS: &str = r#"{
        "atoms": ["p"],
        "agents": ["1"],
        "spaces": {"p": ["p", "np"], "": ["o"]},
        "projections": {"p->": {"p": "o", "np": "o"}},
        "pi": {"1": {"p:p": ["p:p"], "p:np": ["p:np"], ":o": [":o"]}},
        "valuation": {"p": {"base_space": "p", "base": ["p"]}}
    }"#;

    #[test]
    fn hms_round_trips_through_text() {
        let m = parse_model(TINY_HMS).unwrap();
        let AnyModel::Hms(h) = &m else { panic!("wrong family") };
        assert!(h.validate().is_empty());
        let again = parse_model(&render_model(&m)).unwrap();
        assert_eq!(render_model(&again), render_model(&m));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = TINY_HMS.replacen("\"atoms\"", "\"atomz\": [], \"atoms\"", 1);
        assert!(matches!(parse_model(&bad), Err(crate::Error::Model(ModelError::Malformed(_)))));
    }

    #[test]
    fn missing_projection_is_an_input_error() {
        let bad = TINY_HMS.replace(r#""p->": {"p": "o", "np": "o"}"#, "");
        assert!(parse_model(&bad).is_err());
    }

    #[test]
    fn fh_round_trips_through_text() {
        let text = r#"{
            "atoms": ["p"], "agents": ["1"], "worlds": ["w", "v"],
            "relations": {"1": [["w","w"],["v","v"],["w","v"],["v","w"]]},
            "awareness": {"1": {"w": ["p"], "v": ["p"]}},
            "valuation": {"p": ["w"]}
        }"#;
        let m = parse_model(text).unwrap();
        let AnyModel::Fh(k) = &m else { panic!("wrong family") };
        assert!(k.validate().is_empty());
        let AnyModel::Fh(k2) = parse_model(&render_model(&m)).unwrap() else { panic!() };
        assert_eq!(&k2, k);
    }
}
