//! Graphviz export.

use std::fmt::Write;

use crate::graph::LabeledGraph;
use crate::open::OpenGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn body(out: &mut String, g: &LabeledGraph) {
    let gr = g.graph();
    for v in 0..gr.vertex_count() {
        writeln!(out, "  v{v} [label={}];", quote(gr.vertex_name(v))).unwrap();
    }
    for e in 0..gr.edge_count() {
        writeln!(out, "  v{} -> v{} [label={}];", gr.src(e), gr.tgt(e), quote(&g.label_name(e))).unwrap();
    }
}

/// A `digraph` with one node per vertex and one edge per edge, in id
/// order, each edge carrying its label.
pub fn to_dot(g: &LabeledGraph) -> String {
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    body(&mut out, g);
    out.push_str("}\n");
    out
}

/// Like [`to_dot`], with foot points drawn as boxes joined to their
/// vertices by dashed lines.
pub fn open_to_dot(x: &OpenGraph) -> String {
    let mut out = String::from("digraph G {\n  rankdir=LR;\n");
    body(&mut out, x.inner());
    for (side, foot, leg) in [("a", x.left_foot(), x.leg_in()), ("b", x.right_foot(), x.leg_out())] {
        for (i, (p, &v)) in foot.iter().zip(leg).enumerate() {
            writeln!(out, "  {side}{i} [shape=box, label={}];", quote(p)).unwrap();
            let (from, to) = if side == "a" { (format!("{side}{i}"), format!("v{v}")) } else { (format!("v{v}"), format!("{side}{i}")) };
            writeln!(out, "  {from} -> {to} [style=dashed, arrowhead=none];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
