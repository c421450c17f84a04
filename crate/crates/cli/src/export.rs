//! Graphviz DOT exporters.

use linefield::complex::Cell;
use linefield::field::LineField;
use linefield::hasse::{HasseDiagram, Matching};
use linefield::homotopy::ReducedField;
use linefield::radial::EmbeddedBipartiteGraph;

fn node_id(c: Cell) -> String {
    c.to_string()
}

/// A Hasse diagram ranked by dimension; matched edges are drawn bold.
pub fn dot_hasse(h: &HasseDiagram, matching: Option<&Matching>) -> String {
    let mut out = String::from("graph hasse {\n  rankdir=BT;\n");
    for dim in 0..=2 {
        let nodes: Vec<String> = h
            .nodes()
            .iter()
            .filter(|n| n.dimension() == dim)
            .map(|&n| format!("\"{}\";", node_id(n)))
            .collect();
        if !nodes.is_empty() {
            out.push_str(&format!("  {{ rank=same; {} }}\n", nodes.join(" ")));
        }
    }
    for (i, e) in h.edges().iter().enumerate() {
        let matched = matching.map_or(false, |m| m.contains_index(i));
        let style = if matched {
            " [penwidth=3, color=black]"
        } else {
            " [color=gray50]"
        };
        out.push_str(&format!(
            "  \"{}\" -- \"{}\"{};\n",
            node_id(e.lower),
            node_id(e.upper),
            style
        ));
    }
    out.push_str("}\n");
    out
}

/// The reduced Hasse diagram with indices as node labels.
pub fn dot_reduced(r: &ReducedField) -> String {
    let mut out = String::from("graph reduced {\n  rankdir=BT;\n");
    for &v in &r.critical_vertices {
        out.push_str(&format!("  \"v{}\" [label=\"v{} index 1\"];\n", v.0, v.0));
    }
    for &e in &r.critical_edges {
        out.push_str(&format!("  \"e{}\" [label=\"e{}\"];\n", e.0, e.0));
    }
    for &(f, c, idx) in &r.critical_faces {
        out.push_str(&format!(
            "  \"f{}\" [label=\"f{} C={} index {}\"];\n",
            f.0, f.0, c, idx
        ));
    }
    for e in r.reduced_hasse.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\";\n",
            node_id(e.lower),
            node_id(e.upper)
        ));
    }
    out.push_str("}\n");
    out
}

/// A radial graph with vertex cells as circles and face cells as boxes.
pub fn dot_radial(g: &EmbeddedBipartiteGraph) -> String {
    let mut out = String::from("graph radial {\n");
    for (i, c) in g.a_cells().iter().enumerate() {
        out.push_str(&format!("  a{} [shape=circle, label=\"{}\"];\n", i, c));
    }
    for (i, c) in g.b_cells().iter().enumerate() {
        out.push_str(&format!("  b{} [shape=box, label=\"{}\"];\n", i, c));
    }
    let graph = g.graph();
    for e in graph.edge_ids() {
        let (x, y) = graph.edge_endpoints(e);
        let (a, b) = if g.is_part_a(x) { (x, y) } else { (y, x) };
        out.push_str(&format!("  a{} -- b{};\n", a.0, b.0 - g.num_a()));
    }
    out.push_str("}\n");
    out
}

/// Matched pairs as `(cell, cell)` id pairs, the JSON form of a matching.
pub fn matching_pairs_json(h: &HasseDiagram, m: &Matching) -> serde_json::Value {
    serde_json::Value::Array(
        m.pairs(h)
            .into_iter()
            .map(|(lo, up)| serde_json::json!([lo.to_string(), up.to_string()]))
            .collect(),
    )
}

/// The field's matching as `(vertex, edge)` pairs.
pub fn field_pairs_json(field: &LineField) -> serde_json::Value {
    serde_json::Value::Array(
        field
            .pairs()
            .iter()
            .map(|p| serde_json::json!({ "vertex": p.vertex.0, "edge": p.edge.0 }))
            .collect(),
    )
}
