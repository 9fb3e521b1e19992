//! Line-diagram export as a Graphviz digraph with reduced labelling.

use std::fmt::Write;

use super::lattice::ConceptLattice;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DOT_CONCEPTS: usize = 5000;

/// Nodes are `c<index>`; each edge points from a concept to one of its upper covers.
/// An object labels its object concept, an attribute its attribute concept.
pub fn export_dot(lattice: &ConceptLattice, max_concepts: usize) -> Result<String> {
    if lattice.len() > max_concepts {
        return Err(Error::ResourceLimit(format!(
            "lattice has {} concepts, DOT export limit is {max_concepts}",
            lattice.len()
        )));
    }
    let ctx = lattice.context();
    let mut objects = vec![Vec::new(); lattice.len()];
    let mut attributes = vec![Vec::new(); lattice.len()];
    for (g, name) in ctx.objects().iter().enumerate() {
        objects[lattice.object_concept(g)].push(name.as_str());
    }
    for (m, name) in ctx.attributes().iter().enumerate() {
        attributes[lattice.attribute_concept(m)].push(name.as_str());
    }

    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for i in 0..lattice.len() {
        let label = format!(
            "{}\\n{}",
            escape(&attributes[i].join(", ")),
            escape(&objects[i].join(", "))
        );
        writeln!(out, "  c{i} [label=\"{label}\"];").unwrap();
    }
    for (lo, up) in lattice.cover_edges() {
        writeln!(out, "  c{lo} -> c{up};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
