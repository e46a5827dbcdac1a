//! The logic of propositional awareness: axiom schemata, proof checking and
//! soundness fuzzing.

pub mod fuzz;
pub mod proof;
pub mod schema;

pub use fuzz::{check_schemata, fuzz_soundness, random_formula, FuzzConfig, FuzzOutcome, LatticeOracle, ModelClass, ValidityOracle};
pub use proof::{check_proof, is_tautology, parse_proof, render_proof, Justification, ProofLine, Verdict};
pub use schema::{instance, match_schema, Substitution, RULES, SCHEMATA};
