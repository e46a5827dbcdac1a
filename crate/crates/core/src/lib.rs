//! Epistemic models with unawareness: lattice-based unawareness structures,
//! their implicit-knowledge variants, awareness structures, the
//! transformations between them, and a proof checker for the logic of
//! propositional awareness.

pub mod atoms;
pub mod cli;
pub mod dot;
pub mod enumerate;
pub mod error;
pub mod fh;
pub mod fixtures;
pub mod genmodels;
pub mod hms;
pub mod implicit;
pub mod io;
pub mod lpa;
pub mod mutation;
pub mod report;
pub mod semantics;
pub mod syntax;
pub mod transforms;

pub use error::{Error, ModelError, Result, SyntaxError};
pub use report::{Law, Report, Violation};
