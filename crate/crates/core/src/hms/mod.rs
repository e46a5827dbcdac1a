//! Unawareness structures: the lattice of spaces, events, possibility
//! correspondences and the explicit knowledge and awareness operators.

pub mod lattice;
pub mod model;
pub mod ops;
pub mod suite;

pub use lattice::{Event, Lattice, StateSet};
pub use model::{validate_possibility, Correspondence, Frame, HmsModel};
pub use ops::{ImplicitKnowledge, UnawarenessStructure};
pub use suite::{event_basis, SuiteConfig};

use crate::error::{Error, Result};
use crate::report::Report;

/// Checks every explicit law over the event basis. Refuses models that do not
/// validate.
pub fn explicit_property_suite(m: &HmsModel, cfg: &SuiteConfig) -> Result<Report> {
    let pre = m.validate();
    if !pre.is_empty() {
        return Err(Error::PreconditionFailed(pre));
    }
    Ok(suite::explicit_laws(m, cfg))
}
