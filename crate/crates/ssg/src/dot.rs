// SPDX-License-Identifier: Apache-2.0

//! Graphviz output for the Moore diagram, ℋ and Δ.

use std::fmt::Write as _;

use ssg_core::machine::MachineStore;
use ssg_core::nucleus::MooreDiagram;
use ssg_core::pipeline::Analysis;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn diagram(store: &MachineStore, name: &str, d: &MooreDiagram, pair_labels: bool) -> String {
    let graph = store.graph();
    let mut out = format!("digraph {name} {{\n");
    for (i, &g) in d.vertices.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label={}];", quote(&store.label(g)));
    }
    let index = |g| d.vertices.iter().position(|&x| x == g).expect("edge endpoints are vertices");
    for e in &d.edges {
        let label = if pair_labels {
            format!("({}, {})", graph.edge_name(e.edge), graph.edge_name(e.image))
        } else {
            graph.edge_name(e.edge).to_string()
        };
        let _ = writeln!(out, "  n{} -> n{} [label={}];", index(e.from), index(e.to), quote(&label));
    }
    out.push_str("}\n");
    out
}

/// Edges `g → g|_e` labelled `(e, g(e))`.
pub fn moore(store: &MachineStore, d: &MooreDiagram) -> String {
    diagram(store, "moore", d, true)
}

/// The label-diagonal part, edges labelled by `e`.
pub fn h_graph(store: &MachineStore, d: &MooreDiagram) -> String {
    diagram(store, "h", d, false)
}

/// Δ with synchronized vertices drawn as double circles.
pub fn delta(store: &MachineStore, a: &Analysis) -> String {
    let graph = store.graph();
    let mut out = String::from("digraph delta {\n");
    for i in 0..a.delta.len() {
        let shape = if a.synchronized.contains(&i) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  d{i} [label={}, shape={shape}];", quote(&a.delta.vertex_label(store, i)));
    }
    for &(i, e, j) in &a.delta.edges {
        let _ = writeln!(out, "  d{i} -> d{j} [label={}];", quote(graph.edge_name(e)));
    }
    out.push_str("}\n");
    out
}

/// `(file name, contents)` for all three diagrams.
pub fn all(store: &MachineStore, a: &Analysis) -> Vec<(&'static str, String)> {
    vec![
        ("moore.dot", moore(store, &a.moore)),
        ("h.dot", h_graph(store, &a.h)),
        ("delta.dot", delta(store, a)),
    ]
}
