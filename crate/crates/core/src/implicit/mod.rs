//! Implicit knowledge on unawareness structures: complemented structures
//! (`Λ` alongside `Π`) and implicit-knowledge-based structures (`Λ*` and `α`
//! with a derived `Π*`).

pub mod complemented;
pub mod star;

pub use complemented::{
    candidate_lambda_from_pi, implicit_laws, implicit_property_suite, validate_implicit, validate_joint,
    ComplementedModel,
};
pub use star::{derivation_laws, derivation_suite, DerivedModel, ImplicitModel};
