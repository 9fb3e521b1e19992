//! Formal concept analysis: contexts, derivations, concept enumeration and lattices.

pub mod bitset;
pub mod concepts;
pub mod context;
pub mod cxt;
pub mod dot;
pub mod lattice;
pub mod positive;

pub use bitset::BitSet;
pub use concepts::{
    count_concepts, enumerate_concepts, for_each_concept, FormalConcept, NamedConcept,
    DEFAULT_MAX_CONCEPTS,
};
pub use context::FormalContext;
pub use cxt::{parse_cxt, read_cxt, write_cxt};
pub use dot::{export_dot, DEFAULT_MAX_DOT_CONCEPTS};
pub use lattice::{ConceptLattice, SharedConcepts};
pub use positive::{positive_part, restrict_to_positive};
