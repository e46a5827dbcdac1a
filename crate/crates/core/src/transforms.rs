//! Transformations between awareness structures and lattice models, and the
//! formula-level equivalence checks between a model and its transform.
//!
//! States are aligned by name: a top-space state of a lattice model and a
//! world of an awareness structure correspond iff they carry the same id.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::atoms::AtomSet;
use crate::enumerate::{enumerate, EnumConfig};
use crate::error::{Error, ModelError, Result};
use crate::fh::category::{build_category, FhCategory};
use crate::fh::model::{FhModel, WorldSet};
use crate::hms::lattice::Lattice;
use crate::hms::model::{Correspondence, Frame};
use crate::hms::ops::UnawarenessStructure;
use crate::implicit::{ComplementedModel, DerivedModel, ImplicitModel};
use crate::io::AnyModel;
use crate::report::{Law, Report};
use crate::semantics::{EventModel, Events};

fn broken(stage: &'static str, report: Report) -> Error {
    Error::TransformInvariantBroken { stage, report }
}

/// The implicit-knowledge-based lattice model of a category: spaces are the
/// sublanguage models, projections the morphisms, `Λ*` the relations and
/// `α` the awareness atoms.
pub fn t_transform(c: &FhCategory) -> Result<ImplicitModel> {
    if c.top != c.universe.full() {
        return Err(ModelError::Malformed("the category must cover the whole atom universe".into()).into());
    }
    let n = 1usize << c.universe.len();
    let space_states: Vec<Vec<String>> = (0..n)
        .map(|b| c.model(AtomSet::from_bits(b as u32)).worlds.clone())
        .collect();
    let mut covers = HashMap::new();
    for phi in c.languages() {
        for x in phi.iter() {
            covers.insert((phi, x), c.morphism(phi, phi.remove(x)).map.clone());
        }
    }
    let lattice = Lattice::new(c.universe.clone(), space_states, covers)?;
    let agents = c.model(c.top).agents.clone();
    let total = lattice.state_count();

    let mut lambda = Vec::with_capacity(agents.len());
    let mut alpha = Vec::with_capacity(agents.len());
    for i in 0..agents.len() {
        let mut images = vec![lattice.empty_set(); total];
        let mut levels = vec![AtomSet::EMPTY; total];
        for phi in c.languages() {
            let k = c.model(phi);
            let start = lattice.states_in(phi).start;
            for w in 0..k.world_count() {
                for t in k.relations[i][w].ones() {
                    images[start + w].insert(start + t);
                }
                levels[start + w] = k.awareness[i][w];
            }
        }
        lambda.push(Correspondence::new(&lattice, images, "Λ*")?);
        alpha.push(levels);
    }

    let mut valuation = Vec::with_capacity(c.universe.len());
    let mut vreport = Report::new();
    for p in 0..c.universe.len() {
        let mut union = lattice.empty_set();
        for phi in c.languages().filter(|phi| phi.contains(p)) {
            let start = lattice.states_in(phi).start;
            for w in c.model(phi).valuation[p].ones() {
                union.insert(start + w);
            }
        }
        let own = AtomSet::singleton(p);
        let e = lattice.event_restricting(own, &union);
        vreport.check(lattice.up_closure(&e) == union, Law::ValuationBaseSpace, || {
            format!("the worlds satisfying {} do not form an event based at `{}`", c.universe.name(p), lattice.key(own))
        });
        valuation.push(e);
    }
    if !vreport.is_empty() {
        return Err(broken("t-transform", vreport));
    }

    let frame = Frame::new(lattice, agents, valuation)?;
    let im = ImplicitModel::new(frame, lambda, alpha)?;
    let report = im.validate();
    if report.is_empty() {
        Ok(im)
    } else {
        Err(broken("t-transform", report))
    }
}

/// Category then T-transform.
pub fn truncated_hms_transform(k: &FhModel, minimize: bool) -> Result<ImplicitModel> {
    t_transform(&build_category(k, minimize)?)
}

/// Category, T-transform, derived `Π*`, with `α` dropped.
pub fn hms_transform(k: &FhModel, minimize: bool) -> Result<ComplementedModel> {
    let im = truncated_hms_transform(k, minimize)?;
    let derived = im.derive_pi_star().map_err(|e| match e {
        Error::DerivationInconsistent(r) | Error::PreconditionFailed(r) => broken("hms-transform", r),
        other => other,
    })?;
    let c = derived.into_complemented();
    let report = c.validate();
    if report.is_empty() {
        Ok(c)
    } else {
        Err(broken("hms-transform", report))
    }
}

fn top_space_model(
    frame: &Frame,
    relation: impl Fn(usize, usize) -> WorldSet,
    awareness: impl Fn(usize, usize) -> AtomSet,
) -> Result<FhModel, ModelError> {
    let l = &frame.lattice;
    let top = l.top();
    let range = l.states_in(top);
    let n = range.len();
    let worlds: Vec<String> = l.space_names(top).to_vec();
    let agents = frame.agents.clone();
    let relations = (0..agents.len())
        .map(|i| range.clone().map(|s| relation(i, s)).collect())
        .collect();
    let aw = (0..agents.len())
        .map(|i| range.clone().map(|s| awareness(i, s)).collect())
        .collect();
    let valuation = (0..l.atoms().len())
        .map(|p| {
            let up = l.up_closure(&frame.valuation[p]);
            let mut v = WorldSet::with_capacity(n);
            for s in range.clone() {
                if up.contains(s) {
                    v.insert(s - range.start);
                }
            }
            v
        })
        .collect();
    FhModel::new(l.atoms().clone(), top, agents, worlds, relations, aw, valuation)
}

fn cell_within_top(l: &Lattice, img: &crate::hms::lattice::StateSet) -> WorldSet {
    let range = l.states_in(l.top());
    let mut out = WorldSet::with_capacity(range.len());
    for s in img.ones() {
        if range.contains(&s) {
            out.insert(s - range.start);
        }
    }
    out
}

/// The top space with `R = Λ` and awareness read off the space of `Π`.
pub fn fh_transform(c: &ComplementedModel) -> Result<FhModel> {
    let pre = c.validate();
    if !pre.is_empty() {
        return Err(Error::PreconditionFailed(pre));
    }
    let l = c.lattice();
    let k = top_space_model(
        &c.base.frame,
        |i, s| cell_within_top(l, c.lambda[i].image(s)),
        |i, s| c.possibility_space(i, s).expect("confined"),
    )?;
    let report = k.validate();
    if report.is_empty() {
        Ok(k)
    } else {
        Err(broken("fh-transform", report))
    }
}

/// The top space with `R = Λ*` and awareness read off `α`.
pub fn fh_star_transform(im: &ImplicitModel) -> Result<FhModel> {
    let pre = im.validate();
    if !pre.is_empty() {
        return Err(Error::PreconditionFailed(pre));
    }
    let l = im.lattice();
    let k = top_space_model(
        &im.frame,
        |i, s| cell_within_top(l, im.lambda_star[i].image(s)),
        |i, s| im.alpha[i][s],
    )?;
    let report = k.validate();
    if report.is_empty() {
        Ok(k)
    } else {
        Err(broken("fh-star-transform", report))
    }
}

/// Transform names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    /// Awareness structure to complemented lattice model.
    Hms,
    /// Awareness structure to implicit-knowledge-based lattice model.
    ImplicitHms,
    /// Complemented lattice model to awareness structure.
    Fh,
    /// Implicit-knowledge-based lattice model to awareness structure.
    FhStar,
}

impl Transform {
    pub const ALL: [Transform; 4] = [Transform::Hms, Transform::ImplicitHms, Transform::Fh, Transform::FhStar];

    pub fn name(self) -> &'static str {
        match self {
            Transform::Hms => "hms",
            Transform::ImplicitHms => "implicit-hms",
            Transform::Fh => "fh",
            Transform::FhStar => "fh-star",
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Transform::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown transform `{s}` (expected hms, implicit-hms, fh or fh-star)"))
    }
}

fn check_alignment(a_atoms: &crate::atoms::AtomTable, b_atoms: &crate::atoms::AtomTable, a_agents: &[String], b_agents: &[String]) -> Result<(), ModelError> {
    if a_atoms != b_atoms {
        return Err(ModelError::Malformed(format!(
            "atom sets differ: {:?} vs {:?}",
            a_atoms.names(),
            b_atoms.names()
        )));
    }
    if a_agents != b_agents {
        return Err(ModelError::Malformed(format!("agent lists differ: {a_agents:?} vs {b_agents:?}")));
    }
    Ok(())
}

/// For each world, the top-space state with the same id.
fn align(k: &FhModel, l: &Lattice) -> Result<Vec<usize>, ModelError> {
    if k.language != l.top() {
        return Err(ModelError::Malformed("the awareness structure must speak the whole language".into()));
    }
    if k.world_count() != l.space_size(l.top()) {
        return Err(ModelError::Malformed(format!(
            "{} worlds but {} top-space states",
            k.world_count(),
            l.space_size(l.top())
        )));
    }
    k.worlds
        .iter()
        .map(|w| {
            l.find_state(l.top(), w)
                .ok_or_else(|| ModelError::UnknownState(format!("world `{w}` has no top-space state")))
        })
        .collect()
}

/// `K, w ⊩ φ` iff `M, w_Φ ⊨ φ` for every world `w` and every `Φ ⊇ At(φ)`,
/// over all enumerated formulas. `M` is evaluated with its own operators, so
/// implicit-knowledge-based models use `A*`.
fn fh_against_lattice<M: EventModel + ?Sized>(k: &FhModel, m: &M, cfg: &EnumConfig) -> Result<Report> {
    let l = m.lattice();
    check_alignment(&k.universe, l.atoms(), &k.agents, m.agents())?;
    let states = align(k, l)?;
    let pair = (k, Events(m));
    let mut report = Report::new();
    for e in enumerate(&pair, l.top(), cfg) {
        let (worlds, event) = &e.value;
        let up = l.up_closure(event);
        for (w, &s) in states.iter().enumerate() {
            let fh = worlds.contains(w);
            for extra in l.top().difference(e.atoms).subsets() {
                let phi = e.atoms.union(extra);
                let sp = l.project(s, phi).expect("below top");
                report.check(up.contains(sp) == fh, Law::FormulaDisagreement, || {
                    format!(
                        "{}: {} at world {} but {} at {}",
                        e.formula,
                        fh,
                        k.worlds[w],
                        up.contains(sp),
                        l.label(sp)
                    )
                });
            }
        }
    }
    Ok(report)
}

/// Agreement at every top-space state.
fn lattice_against_fh<M: EventModel + ?Sized>(m: &M, k: &FhModel, cfg: &EnumConfig) -> Result<Report> {
    let l = m.lattice();
    check_alignment(l.atoms(), &k.universe, m.agents(), &k.agents)?;
    let states = align(k, l)?;
    let pair = (Events(m), k);
    let mut report = Report::new();
    for e in enumerate(&pair, l.top(), cfg) {
        let (event, worlds) = &e.value;
        let up = l.up_closure(event);
        for (w, &s) in states.iter().enumerate() {
            report.check(up.contains(s) == worlds.contains(w), Law::FormulaDisagreement, || {
                format!(
                    "{}: {} at {} but {} at world {}",
                    e.formula,
                    up.contains(s),
                    l.label(s),
                    worlds.contains(w),
                    k.worlds[w]
                )
            });
        }
    }
    Ok(report)
}

/// Two awareness structures agree world by world (matched by name).
pub fn fh_against_fh(a: &FhModel, b: &FhModel, cfg: &EnumConfig, law: Law) -> Result<Report> {
    check_alignment(&a.universe, &b.universe, &a.agents, &b.agents)?;
    if a.language != b.language || a.world_count() != b.world_count() {
        return Err(ModelError::Malformed("models differ in language or world count".into()).into());
    }
    let map: Vec<usize> = a
        .worlds
        .iter()
        .map(|w| b.world_index(w).ok_or_else(|| ModelError::UnknownState(w.clone())))
        .collect::<Result<_, _>>()?;
    let mut report = Report::new();
    for e in enumerate(&(a, b), a.language, cfg) {
        let (va, vb) = &e.value;
        for (w, &t) in map.iter().enumerate() {
            report.check(va.contains(w) == vb.contains(t), law, || {
                format!("{} differs at {}", e.formula, a.worlds[w])
            });
        }
    }
    Ok(report)
}

/// A model of any family, as consumed by [`equivalence_check`].
#[derive(Clone, Copy, Debug)]
pub enum ModelRef<'a> {
    Fh(&'a FhModel),
    Complemented(&'a ComplementedModel),
    Implicit(&'a ImplicitModel),
}

fn derive(im: &ImplicitModel) -> Result<DerivedModel> {
    im.derive_pi_star()
}

/// Formula-level agreement between `a` and `b = via(a)`, up to `depth`.
pub fn equivalence_check(a: ModelRef<'_>, b: ModelRef<'_>, via: Transform, cfg: &EnumConfig) -> Result<Report> {
    match (via, a, b) {
        (Transform::Hms, ModelRef::Fh(k), ModelRef::Complemented(m)) => fh_against_lattice(k, m, cfg),
        (Transform::ImplicitHms, ModelRef::Fh(k), ModelRef::Implicit(im)) => fh_against_lattice(k, &derive(im)?, cfg),
        (Transform::Fh, ModelRef::Complemented(m), ModelRef::Fh(k)) => lattice_against_fh(m, k, cfg),
        (Transform::FhStar, ModelRef::Implicit(im), ModelRef::Fh(k)) => lattice_against_fh(&derive(im)?, k, cfg),
        (via, a, b) => Err(ModelError::Malformed(format!(
            "comparing via `{via}` needs {}, got {} and {}",
            match via {
                Transform::Hms => "an awareness structure and a complemented lattice model",
                Transform::ImplicitHms => "an awareness structure and an implicit-knowledge-based model",
                Transform::Fh => "a complemented lattice model and an awareness structure",
                Transform::FhStar => "an implicit-knowledge-based model and an awareness structure",
            },
            a.family(),
            b.family()
        ))
        .into()),
    }
}

impl ModelRef<'_> {
    pub fn family(&self) -> &'static str {
        match self {
            ModelRef::Fh(_) => "an awareness structure",
            ModelRef::Complemented(_) => "a complemented lattice model",
            ModelRef::Implicit(_) => "an implicit-knowledge-based model",
        }
    }
}

impl<'a> TryFrom<&'a AnyModel> for ModelRef<'a> {
    type Error = ModelError;
    fn try_from(m: &'a AnyModel) -> Result<Self, ModelError> {
        match m {
            AnyModel::Fh(k) => Ok(ModelRef::Fh(k)),
            AnyModel::Complemented(c) => Ok(ModelRef::Complemented(c)),
            AnyModel::Implicit(im) => Ok(ModelRef::Implicit(im)),
            AnyModel::Hms(_) => Err(ModelError::Malformed(
                "a lattice model without `lambda` is not the output of any transform".into(),
            )),
        }
    }
}

/// Applies `to` to a model of the matching source family.
pub fn apply(m: &AnyModel, to: Transform, minimize: bool) -> Result<AnyModel> {
    Ok(match (to, m) {
        (Transform::Hms, AnyModel::Fh(k)) => AnyModel::Complemented(hms_transform(k, minimize)?),
        (Transform::ImplicitHms, AnyModel::Fh(k)) => AnyModel::Implicit(truncated_hms_transform(k, minimize)?),
        (Transform::Fh, AnyModel::Complemented(c)) => AnyModel::Fh(fh_transform(c)?),
        (Transform::FhStar, AnyModel::Implicit(im)) => AnyModel::Fh(fh_star_transform(im)?),
        (to, m) => {
            let expected = match to {
                Transform::Hms | Transform::ImplicitHms => "an awareness structure",
                Transform::Fh => "a complemented lattice model",
                Transform::FhStar => "an implicit-knowledge-based model",
            };
            return Err(ModelError::Malformed(format!("transform `{to}` needs {expected}, got a {} model", m.family())).into());
        }
    })
}

/// Awareness structure to category to T-transform to FH*-transform, compared
/// with the source world by world.
pub fn round_trip(k: &FhModel, minimize: bool, cfg: &EnumConfig) -> Result<Report> {
    let im = truncated_hms_transform(k, minimize)?;
    let back = fh_star_transform(&im)?;
    let mut report = Report::new();
    report.check(back.worlds == k.worlds, Law::RoundTripMismatch, || {
        format!("worlds {:?} came back as {:?}", k.worlds, back.worlds)
    });
    report.extend(fh_against_fh(k, &back, cfg, Law::RoundTripMismatch)?);
    Ok(report)
}

/// Every direction on one source structure: FH to HMS, FH to implicit HMS,
/// the HMS transform back to FH, the implicit model to FH*, and the round
/// trip.
pub fn transform_equivalence_suite(k: &FhModel, minimize: bool, cfg: &EnumConfig) -> Result<Report> {
    let m = hms_transform(k, minimize)?;
    let im = truncated_hms_transform(k, minimize)?;
    let mut report = equivalence_check(ModelRef::Fh(k), ModelRef::Complemented(&m), Transform::Hms, cfg)?;
    report.extend(equivalence_check(ModelRef::Fh(k), ModelRef::Implicit(&im), Transform::ImplicitHms, cfg)?);
    let back = fh_transform(&m)?;
    report.extend(equivalence_check(ModelRef::Complemented(&m), ModelRef::Fh(&back), Transform::Fh, cfg)?);
    let star = fh_star_transform(&im)?;
    report.extend(equivalence_check(ModelRef::Implicit(&im), ModelRef::Fh(&star), Transform::FhStar, cfg)?);
    report.extend(round_trip(k, minimize, cfg)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1l, fig1r};
    use crate::genmodels::{gen_fh, Caps};

    #[test]
    fn fixtures_agree_with_their_fh_transform() {
        let cfg = EnumConfig::with_depth(2);
        for m in [fig1l(), fig1r()] {
            let k = fh_transform(&m).unwrap();
            let r = equivalence_check(ModelRef::Complemented(&m), ModelRef::Fh(&k), Transform::Fh, &cfg).unwrap();
            assert!(r.is_empty(), "{r}");
        }
    }

    #[test]
    fn fig1r_survives_the_minimized_round_trip() {
        let k = fh_transform(&fig1r()).unwrap();
        let back = hms_transform(&k, true).unwrap();
        let l = back.lattice();
        let sizes: Vec<usize> = l.space_indices().map(|s| l.space_size(s)).collect();
        assert_eq!(sizes, [1, 2, 2, 4]);
        let r = equivalence_check(ModelRef::Fh(&k), ModelRef::Complemented(&back), Transform::Hms, &EnumConfig::default())
            .unwrap();
        assert!(r.is_empty(), "{r}");
    }

    #[test]
    fn generated_structures_pass_every_direction() {
        for seed in 0..6 {
            let k = gen_fh(seed, Caps::new(2, 4, 2)).unwrap();
            for minimize in [false, true] {
                let r = transform_equivalence_suite(&k, minimize, &EnumConfig::with_depth(2)).unwrap();
                assert!(r.is_empty(), "seed {seed}, minimize {minimize}: {r}");
            }
        }
    }

    #[test]
    fn mismatched_families_are_input_errors() {
        let m = fig1l();
        let r = equivalence_check(ModelRef::Complemented(&m), ModelRef::Complemented(&m), Transform::Fh, &EnumConfig::default());
        assert!(matches!(r, Err(Error::Model(ModelError::Malformed(_)))));
    }

    #[test]
    fn transform_names_round_trip() {
        for t in Transform::ALL {
            assert_eq!(t.name().parse::<Transform>().unwrap(), t);
        }
        assert!("hmss".parse::<Transform>().is_err());
    }
}

