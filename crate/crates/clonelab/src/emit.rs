//! DOT and JSON output for lattices.

use clonelab_core::lattice::{to_dot, Lattice};
use serde::Serialize;
use std::io;
use std::path::Path;

#[derive(Serialize)]
struct JsonNode {
    id: usize,
    label: String,
    cr16: Vec<String>,
    downset: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct JsonLattice {
    k: usize,
    trunc: usize,
    nodes: Vec<JsonNode>,
    edges: Vec<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
}

pub fn to_json(lattice: &Lattice) -> String {
    let doc = JsonLattice {
        k: lattice.k(),
        trunc: lattice.trunc(),
        nodes: lattice
            .nodes()
            .iter()
            .enumerate()
            .map(|(id, n)| JsonNode {
                id,
                label: n.label.clone(),
                cr16: n.fingerprint.cr16().iter().map(|d| d.to_string()).collect(),
                downset: n.fingerprint.downset().maximal().to_vec(),
            })
            .collect(),
        edges: lattice.edges().iter().map(|&(a, b)| [a, b]).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn render(lattice: &Lattice, format: Format) -> String {
    match format {
        Format::Dot => to_dot(lattice),
        Format::Json => to_json(lattice),
    }
}

pub fn write(lattice: &Lattice, format: Format, path: &Path) -> io::Result<()> {
    std::fs::write(path, render(lattice, format))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_lattice_outputs() {
        let lat = Lattice::new(1, 2, Vec::new(), Vec::new());
        assert_eq!(render(&lat, Format::Dot), "digraph lattice {\n  rankdir=BT;\n}\n");
        let v: serde_json::Value = serde_json::from_str(&to_json(&lat)).unwrap();
        assert_eq!(v, serde_json::json!({"k": 1, "trunc": 2, "nodes": [], "edges": []}));
        assert!(to_json(&lat).ends_with("}\n"));
    }
}
