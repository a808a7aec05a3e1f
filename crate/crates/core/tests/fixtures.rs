use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use polarity_graphs::algebra::{Builtin, LabelAlgebra};
use polarity_graphs::io::{emit, load, parse, ErrorCode, Model, MorphismKind};
use polarity_graphs::open::OpenGraph;
use polarity_graphs::{fixtures, Graph, LabeledGraph};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn read(name: &str) -> String {
    fs::read_to_string(dir().join(name)).unwrap()
}

fn model(name: &str) -> Model {
    load(&read(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn same_graph(name: &str, expected: &LabeledGraph) {
    let m = model(name);
    let g = m.graph.as_ref().unwrap();
    assert_eq!(g.graph(), expected.graph(), "{name}");
    assert_eq!(g.labels(), expected.labels(), "{name}");
    assert_eq!(g.algebra().name(), expected.algebra().name(), "{name}");
}

fn same_open(name: &str, expected: &OpenGraph) {
    let m = model(name);
    let x = m.open_graph.as_ref().unwrap();
    assert_eq!(x.inner().graph(), expected.inner().graph(), "{name}");
    assert_eq!(x.inner().labels(), expected.inner().labels(), "{name}");
    assert_eq!((x.left_foot(), x.leg_in()), (expected.left_foot(), expected.leg_in()), "{name}");
    assert_eq!((x.right_foot(), x.leg_out()), (expected.right_foot(), expected.leg_out()), "{name}");
}

fn nat(g: Graph) -> LabeledGraph {
    LabeledGraph::unit_labeled(g, Arc::new(LabelAlgebra::builtin(Builtin::NatAdd)))
}

#[test]
fn every_good_fixture_loads_and_is_stable() {
    for entry in fs::read_dir(dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        if name.starts_with("bad_") {
            continue;
        }
        let text = fs::read_to_string(&path).unwrap();
        let file = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        load(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let once = emit(&file);
        assert_eq!(emit(&parse(&once).unwrap()), once, "{name}");
    }
}

#[test]
fn shipped_graphs_match_the_library() {
    same_graph("homework.json", &fixtures::homework());
    same_graph("host_h.json", &fixtures::host_h());
    same_graph("g2.json", &nat(fixtures::g2()));
    same_graph("p2.json", &nat(fixtures::p2()));
    same_graph("q4.json", &nat(fixtures::q4()));
    same_graph("r5.json", &nat(fixtures::r5()));
}

#[test]
fn shipped_open_graphs_match_the_library() {
    same_open("acyclic_red.json", &fixtures::acyclic_red());
    same_open("acyclic_blue.json", &fixtures::acyclic_blue());
    same_open("fan_out.json", &fixtures::fan_out());
    same_open("fan_in.json", &fixtures::fan_in());
    let (red, blue) = fixtures::boolean_counterexample();
    same_open("boolean_red.json", &red);
    same_open("boolean_blue.json", &blue);
}

#[test]
fn shipped_morphisms_match_the_library() {
    let (fine, coarse, map) = fixtures::sales_refinement();
    let m = model("sales_refinement.json");
    let f = m.morphism.as_ref().unwrap();
    assert_eq!(f.kind, MorphismKind::LabelPreserving);
    assert_eq!(f.map, map);
    assert_eq!(f.target.graph(), coarse.graph());
    assert_eq!(m.graph.as_ref().unwrap().graph(), fine.graph());

    let (src, dst, map) = fixtures::coffee_shop();
    let m = model("coffee_shop.json");
    let f = m.morphism.as_ref().unwrap();
    assert_eq!(f.kind, MorphismKind::Additive);
    assert_eq!(f.map, map);
    assert_eq!(f.target.graph(), &dst);
    assert_eq!(m.graph.as_ref().unwrap().labels(), src.labels());
}

#[test]
fn bad_fixtures_are_rejected_or_flagged() {
    let err = load(&read("bad_label.json")).unwrap_err();
    assert_eq!(err.code, ErrorCode::UnknownElement);
    assert!(err.position.is_some());
    let m = model("bad_algebra.json");
    assert!(!m.algebra.validate().is_valid());
}
