//! Reading neurons against background knowledge about the classes.

pub mod background;
pub mod explain;
pub mod relation;
pub mod subgroup;

pub use background::BackgroundKnowledge;
pub use explain::{explain_taxon, joined_context, Direction, Level, Rule};
pub use relation::{neuron_features, symbolic_interpretation, SimilarityKind, SimilaritySpec};
pub use subgroup::{
    default_selectors, evaluate, subgroup_discovery, subgroup_discovery_with, SearchParams, Selector, Subgroup,
};
