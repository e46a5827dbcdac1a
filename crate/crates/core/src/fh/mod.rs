//! Awareness structures: models, satisfaction, bounded morphisms and
//! categories of sublanguage models.

pub mod category;
pub mod model;

pub use category::{
    agreement_table, bisimulation_classes, build_category, category_equivalence_suite, check_bounded_morphism,
    FhCategory, Morphism,
};
pub use model::{FhModel, WorldSet};
