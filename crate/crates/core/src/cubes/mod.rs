//! Precubical sets, HDA, morphisms, labelings and labeling tori.

mod hda;
mod label;
mod morphism;
mod set;

pub use hda::{Hda, Reachable};
pub use label::{
    multiset_count, torus, torus_cube_id, validate_labeling, EventSet, LabelTuple, LabeledHda, Labeling,
};
pub use morphism::{pointed_isomorphism, Morphism, MorphismDefect};
pub use set::{
    product, validate_precubical, CubeId, CubeSpec, PrecubicalSet, Product, Side, ValidationReport, Violation,
};
