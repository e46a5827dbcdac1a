//! Seeded random models.
//!
//! Awareness structures are drawn directly: one random partition per agent,
//! awareness constant on each cell, random valuation. Lattice models are
//! obtained from them through the transforms, so they are valid by
//! construction rather than by rejection sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::atoms::{max_atoms, AtomSet, AtomTable};
use crate::error::{Error, Result};
use crate::fh::model::{FhModel, WorldSet};
use crate::implicit::{ComplementedModel, ImplicitModel};
use crate::transforms::{hms_transform, truncated_hms_transform};

const ATOM_NAMES: [&str; 16] = ["p", "q", "r", "s", "t", "u", "v", "x", "y", "z", "b", "c", "d", "e", "f", "g"];

/// Upper bounds on the size of a generated model. Each actual size is drawn
/// uniformly from `1..=cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub atoms: usize,
    pub worlds: usize,
    pub agents: usize,
}

impl Caps {
    pub const fn new(atoms: usize, worlds: usize, agents: usize) -> Self {
        Caps { atoms, worlds, agents }
    }

    pub fn check(&self) -> Result<()> {
        if self.atoms == 0 || self.worlds == 0 || self.agents == 0 {
            return Err(Error::InvalidCaps(format!(
                "atoms, worlds and agents must be at least 1 (got {}, {}, {})",
                self.atoms, self.worlds, self.agents
            )));
        }
        if self.atoms > max_atoms() {
            return Err(Error::InvalidCaps(format!("{} atoms exceeds the cap of {}", self.atoms, max_atoms())));
        }
        Ok(())
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::new(3, 5, 2)
    }
}

fn random_subset(rng: &mut ChaCha8Rng, within: AtomSet) -> AtomSet {
    let mut out = AtomSet::EMPTY;
    for a in within.iter() {
        if rng.gen_bool(0.5) {
            out.insert(a);
        }
    }
    out
}

/// A validated awareness structure over the full universe; a pure function of
/// `(seed, caps)`.
pub fn gen_fh(seed: u64, caps: Caps) -> Result<FhModel> {
    caps.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=caps.atoms);
    let m = rng.gen_range(1..=caps.worlds);
    let n = rng.gen_range(1..=caps.agents);
    let universe = AtomTable::new(ATOM_NAMES[..k].iter().copied())?;
    let full = universe.full();
    let worlds: Vec<String> = (0..m).map(|w| format!("w{w}")).collect();
    let agents: Vec<String> = (1..=n).map(|i| i.to_string()).collect();

    let mut relations = Vec::with_capacity(n);
    let mut awareness = Vec::with_capacity(n);
    for _ in 0..n {
        let cells = rng.gen_range(1..=m);
        let cell_of: Vec<usize> = (0..m).map(|_| rng.gen_range(0..cells)).collect();
        let levels: Vec<AtomSet> = (0..cells).map(|_| random_subset(&mut rng, full)).collect();
        let rows = (0..m)
            .map(|w| {
                let mut row = WorldSet::with_capacity(m);
                row.extend((0..m).filter(|&t| cell_of[t] == cell_of[w]));
                row
            })
            .collect();
        relations.push(rows);
        awareness.push(cell_of.iter().map(|&c| levels[c]).collect());
    }
    let valuation = (0..k)
        .map(|_| {
            let mut v = WorldSet::with_capacity(m);
            v.extend((0..m).filter(|_| rng.gen_bool(0.5)));
            v
        })
        .collect();
    let model = FhModel::new(universe, full, agents, worlds, relations, awareness, valuation)?;
    debug_assert!(model.validate().is_empty());
    Ok(model)
}

/// `gen_fh` followed by the complemented transform over the minimized
/// category.
pub fn gen_hms(seed: u64, caps: Caps) -> Result<ComplementedModel> {
    hms_transform(&gen_fh(seed, caps)?, true)
}

/// `gen_fh` followed by the implicit-knowledge-based transform over the
/// minimized category.
pub fn gen_implicit(seed: u64, caps: Caps) -> Result<ImplicitModel> {
    truncated_hms_transform(&gen_fh(seed, caps)?, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_structures_validate() {
        for seed in 0..50 {
            let k = gen_fh(seed, Caps::new(3, 5, 2)).unwrap();
            assert!(k.validate().is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn smallest_caps_give_one_reflexive_world() {
        let k = gen_fh(3, Caps::new(1, 1, 1)).unwrap();
        assert_eq!(k.world_count(), 1);
        assert!(k.relations[0][0].contains(0));
        assert_eq!(k.relations[0][0].count_ones(..), 1);
    }

    #[test]
    fn generation_is_reproducible() {
        assert_eq!(gen_fh(11, Caps::default()).unwrap(), gen_fh(11, Caps::default()).unwrap());
    }

    #[test]
    fn zero_caps_are_rejected() {
        assert!(matches!(gen_fh(1, Caps::new(0, 3, 1)), Err(Error::InvalidCaps(_))));
        assert!(matches!(gen_hms(1, Caps::new(0, 3, 1)), Err(Error::InvalidCaps(_))));
    }

    #[test]
    fn generated_lattice_models_validate() {
        for seed in 0..10 {
            let c = gen_hms(seed, Caps::default()).unwrap();
            assert!(c.validate().is_empty(), "seed {seed}");
            let im = gen_implicit(seed, Caps::default()).unwrap();
            assert!(im.validate().is_empty(), "seed {seed}");
        }
    }
}
