//! Graphviz DOT rendering of concept lattices.

use std::collections::HashSet;
use std::fmt::Write;

use crate::bitset::ObjectSet;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;

/// How node labels are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Labeling {
    /// Each object at its object concept, each attribute at its attribute concept.
    #[default]
    Reduced,
    /// Full extent and intent at every node.
    Full,
}

impl std::str::FromStr for Labeling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "reduced" => Ok(Labeling::Reduced),
            "full" => Ok(Labeling::Full),
            other => Err(format!("unknown labeling '{other}' (expected reduced|full)")),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders `lat` as a DOT digraph named `name`. Edges point from each concept
/// to its upper covers; nodes whose extent is in `highlight` are drawn red.
pub fn export_dot(lat: &ConceptLattice, name: &str, highlight: &[ObjectSet], labeling: Labeling) -> Result<String> {
    let mut red: HashSet<usize> = HashSet::new();
    for h in highlight {
        let i = lat
            .position(h)
            .ok_or_else(|| Error::NotAnExtent(format!("{:?}", h.iter().map(|g| lat.objects()[g].as_str()).collect::<Vec<_>>())))?;
        red.insert(i);
    }

    let n = lat.len();
    let mut node_objects: Vec<Vec<&str>> = vec![Vec::new(); n];
    let mut node_attributes: Vec<Vec<&str>> = vec![Vec::new(); n];
    match labeling {
        Labeling::Reduced => {
            // object concept of g: the smallest extent containing g
            for (g, name) in lat.objects().iter().enumerate() {
                if let Some(i) = lat.concepts().iter().position(|c| c.extent.contains(g)) {
                    node_objects[i].push(name);
                }
            }
            // attribute concept of m: the largest extent whose intent holds m
            for (m, name) in lat.attributes().iter().enumerate() {
                if let Some(i) = lat.concepts().iter().rposition(|c| c.intent.contains(m)) {
                    node_attributes[i].push(name);
                }
            }
        }
        Labeling::Full => {
            for (i, c) in lat.concepts().iter().enumerate() {
                node_objects[i] = c.extent.iter().map(|g| lat.objects()[g].as_str()).collect();
                node_attributes[i] = c.intent.iter().map(|m| lat.attributes()[m].as_str()).collect();
            }
        }
    }

    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, style=rounded, fontsize=10];").unwrap();
    for i in 0..n {
        let label = format!("{}\\n{}", escape(&node_attributes[i].join(", ")), escape(&node_objects[i].join(", ")));
        if red.contains(&i) {
            writeln!(out, "  c{i} [label=\"{label}\", color=red, fontcolor=red];").unwrap();
        } else {
            writeln!(out, "  c{i} [label=\"{label}\"];").unwrap();
        }
    }
    for &(lo, hi) in lat.covers() {
        writeln!(out, "  c{lo} -> c{hi};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
