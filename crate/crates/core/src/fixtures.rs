//! Small worked examples used in tests, documentation and the shipped
//! JSON model files.

use std::sync::Arc;

use crate::algebra::{Builtin, LabelAlgebra};
use crate::graph::{Graph, GraphMorphism, LabeledGraph};
use crate::open::OpenGraph;

fn graph(vertices: &[&str], edges: &[(&str, &str)]) -> Graph {
    Graph::from_names(vertices, edges).expect("fixture graph")
}

fn named(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Graph {
    let mut g = Graph::from_names(vertices, &[]).expect("fixture graph");
    for (name, s, t) in edges {
        let (s, t) = (g.vertex_by_name(s).unwrap(), g.vertex_by_name(t).unwrap());
        g.add_named_edge(*name, s, t).unwrap();
    }
    g
}

fn signed(vertices: &[&str], edges: &[(&str, &str, &str)]) -> LabeledGraph {
    let mut g = Graph::from_names(vertices, &[]).expect("fixture graph");
    let mut labels = Vec::new();
    for (s, t, l) in edges {
        let (si, ti) = (g.vertex_by_name(s).unwrap(), g.vertex_by_name(t).unwrap());
        let base = format!("{s}->{t}");
        let name = if g.edge_by_name(&base).is_some() { format!("{base}'") } else { base };
        g.add_named_edge(name, si, ti).unwrap();
        labels.push(*l);
    }
    LabeledGraph::from_names(g, Arc::new(LabelAlgebra::sign()), &labels).expect("fixture labels")
}

/// A causal loop diagram about homework with one reinforcing and one
/// balancing loop.
pub fn homework() -> LabeledGraph {
    signed(
        &["effort", "sleep", "quality", "grades"],
        &[
            ("effort", "sleep", "-"),
            ("sleep", "quality", "+"),
            ("effort", "quality", "+"),
            ("quality", "grades", "+"),
            ("grades", "effort", "-"),
        ],
    )
}

/// `u ⇄ v`.
pub fn g2() -> Graph {
    graph(&["u", "v"], &[("u", "v"), ("v", "u")])
}

/// Two parallel edges `u → v`.
pub fn p2() -> Graph {
    graph(&["u", "v"], &[("u", "v"), ("u", "v")])
}

/// Edges `e1, e2: u → v` and `e3, e4: v → u`.
pub fn q4() -> Graph {
    named(&["u", "v"], &[("e1", "u", "v"), ("e2", "u", "v"), ("e3", "v", "u"), ("e4", "v", "u")])
}

/// Edges `e1, e2: u → v` and `e3, e4, e5: v → u`.
pub fn r5() -> Graph {
    named(
        &["u", "v"],
        &[("e1", "u", "v"), ("e2", "u", "v"), ("e3", "v", "u"), ("e4", "v", "u"), ("e5", "v", "u")],
    )
}

/// A signed host graph containing a positive loop through A, B and C.
pub fn host_h() -> LabeledGraph {
    signed(
        &["A", "B", "C", "D", "E", "F"],
        &[
            ("A", "B", "-"),
            ("B", "C", "+"),
            ("B", "D", "+"),
            ("B", "D", "-"),
            ("D", "E", "+"),
            ("D", "F", "-"),
            ("E", "F", "-"),
            ("C", "A", "-"),
            ("C", "D", "+"),
            ("F", "E", "+"),
            ("F", "C", "+"),
        ],
    )
}

/// A refinement of `sales → profits` into egg and milk sales, with the
/// collapsing map. Returns (fine, coarse, map).
pub fn sales_refinement() -> (LabeledGraph, LabeledGraph, GraphMorphism) {
    let fine = signed(
        &["egg sales", "milk sales", "profits"],
        &[("egg sales", "profits", "+"), ("milk sales", "profits", "+")],
    );
    let coarse = signed(&["sales", "profits"], &[("sales", "profits", "+")]);
    (fine, coarse, GraphMorphism { f0: vec![0, 0, 1], f1: vec![0, 0] })
}

/// Coffee (150) and tea (25) revenue per hour over exact rationals, and
/// the map merging the two edges. Returns (source, target graph, map).
pub fn coffee_shop() -> (LabeledGraph, Graph, GraphMorphism) {
    let two = named(
        &["hours open", "sales"],
        &[("coffee", "hours open", "sales"), ("tea", "hours open", "sales")],
    );
    let one = named(&["hours open", "sales"], &[("revenue", "hours open", "sales")]);
    let src = LabeledGraph::from_names(two, Arc::new(LabelAlgebra::builtin(Builtin::RatAdd)), &["150", "25"])
        .expect("fixture labels");
    (src, one, GraphMorphism { f0: vec![0, 1], f1: vec![0, 0] })
}

/// Unlabeled open graphs are labeled in the one-element monoid.
fn trivial(g: Graph) -> LabeledGraph {
    LabeledGraph::unit_labeled(g, Arc::new(LabelAlgebra::builtin(Builtin::TrivialOne)))
}

/// The red acyclic graph, open on its right at `b, e, g, h`.
pub fn acyclic_red() -> OpenGraph {
    let g = graph(
        &["a", "b", "c", "d", "e", "g", "h"],
        &[("a", "b"), ("a", "h"), ("b", "d"), ("d", "e"), ("c", "a"), ("c", "d"), ("g", "c")],
    );
    OpenGraph::from_vertex_names(trivial(g), &[], &["b", "e", "g", "h"]).expect("fixture legs")
}

/// The blue acyclic graph, open on its left at `b, e, g, h`.
pub fn acyclic_blue() -> OpenGraph {
    let g = graph(
        &["b", "e", "f", "g", "h", "i"],
        &[("e", "f"), ("f", "g"), ("f", "b"), ("i", "b"), ("h", "f"), ("h", "i")],
    );
    OpenGraph::from_vertex_names(trivial(g), &["b", "e", "g", "h"], &[]).expect("fixture legs")
}

/// A signed open graph from a one-point foot `A` to a three-point foot
/// `B`, two of whose points land on the same vertex.
pub fn fan_out() -> OpenGraph {
    let g = signed(
        &["n1", "n2", "n3", "n4", "n5"],
        &[
            ("n1", "n2", "+"),
            ("n1", "n3", "-"),
            ("n2", "n4", "+"),
            ("n3", "n4", "-"),
            ("n5", "n3", "+"),
            ("n2", "n3", "-"),
        ],
    );
    OpenGraph::new(g, vec!["a1".into()], vec![0], vec!["b1".into(), "b2".into(), "b3".into()], vec![3, 4, 4])
        .expect("fixture legs")
}

/// A signed open graph from the three-point foot `B` to a one-point foot.
pub fn fan_in() -> OpenGraph {
    let g = signed(
        &["n6", "n7", "n8", "n9"],
        &[("n6", "n9", "+"), ("n9", "n7", "-"), ("n8", "n9", "+")],
    );
    OpenGraph::new(g, vec!["b1".into(), "b2".into(), "b3".into()], vec![0, 1, 2], vec!["c".into()], vec![3])
        .expect("fixture legs")
}

/// Two red edges `v ⇄ w` and one blue edge `w → v`, all labeled 1 in the
/// boolean rig, glued along both vertices. Returns (red, blue).
pub fn boolean_counterexample() -> (OpenGraph, OpenGraph) {
    let b = Arc::new(LabelAlgebra::boolean_rig());
    let red = named(&["v", "w"], &[("e1", "v", "w"), ("e2", "w", "v")]);
    let blue = named(&["v", "w"], &[("e3", "w", "v")]);
    let red = LabeledGraph::from_names(red, b.clone(), &["1", "1"]).expect("fixture labels");
    let blue = LabeledGraph::from_names(blue, b, &["1"]).expect("fixture labels");
    (
        OpenGraph::from_vertex_names(red, &[], &["v", "w"]).expect("fixture legs"),
        OpenGraph::from_vertex_names(blue, &["v", "w"], &[]).expect("fixture legs"),
    )
}
