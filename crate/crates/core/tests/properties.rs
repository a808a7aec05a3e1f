mod common;

use std::sync::Arc;

use polarity_graphs::algebra::{product_algebra, Builtin, Elem, LabelAlgebra};
use polarity_graphs::emergence::{GradeWord, Side};
use polarity_graphs::homology::{boundary_pair, decompose_cycle, feedback, is_cycle, simple_loops, Carrier, Chain};
use polarity_graphs::io::{emit, graph_file, load, open_graph_file, parse};
use polarity_graphs::open::{compose, tensor};
use polarity_graphs::{Graph, LabeledGraph};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=7).prop_map(move |edges| Graph::new((0..n).map(|i| format!("v{i}")).collect(), &edges).unwrap())
    })
}

fn graph_with_chains() -> impl Strategy<Value = (Graph, Vec<usize>, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let m = g.edge_count();
        (Just(g), prop::collection::vec(0usize..4, m), prop::collection::vec(0usize..4, m))
    })
}

fn nat() -> LabelAlgebra {
    LabelAlgebra::builtin(Builtin::NatAdd)
}

fn combine(g: &Graph, loops: &[Vec<usize>], mult: &[usize]) -> Vec<usize> {
    let mut c = vec![0; g.edge_count()];
    for (l, &k) in loops.iter().zip(mult) {
        for &e in l {
            c[e] += k;
        }
    }
    c
}

/// A graph with two circulations, each a nonnegative combination of its
/// simple loops.
fn circulations() -> impl Strategy<Value = (Graph, Vec<usize>, Vec<usize>)> {
    graph()
        .prop_flat_map(|g| {
            let loops: Vec<Vec<usize>> = simple_loops(&g).loops.iter().map(|l| l.edges().to_vec()).collect();
            let k = loops.len();
            (Just(g), Just(loops), prop::collection::vec(0usize..3, k), prop::collection::vec(0usize..3, k))
        })
        .prop_map(|(g, loops, m1, m2)| {
            let (a, b) = (combine(&g, &loops, &m1), combine(&g, &loops, &m2));
            (g, a, b)
        })
}

fn word() -> impl Strategy<Value = GradeWord> {
    prop::collection::vec(prop::bool::ANY, 0..12).prop_map(|bs| GradeWord::new(bs.into_iter().map(|b| if b { Side::X } else { Side::Y }).collect()))
}

proptest! {
    #[test]
    fn sampled_commutative_tables_are_valid(seed in any::<u64>()) {
        let alg = random_commutative_table(&mut rng(seed));
        prop_assert!(alg.validate().is_valid());
        prop_assert_eq!(alg.is_cancellative().unwrap().holds(), cancellative(&alg));
    }

    #[test]
    fn products_of_valid_tables_are_valid(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (random_commutative_table(&mut rng(a)), random_commutative_table(&mut rng(b)));
        let p = product_algebra(&x, &y).unwrap();
        prop_assert!(p.validate().is_valid());
        prop_assert_eq!(p.size(), Some(x.size().unwrap() * y.size().unwrap()));
    }

    #[test]
    fn boundaries_are_additive((g, a, b) in graph_with_chains()) {
        let n = nat();
        let (ca, cb) = (nat_chain(&a), nat_chain(&b));
        let (sa, ta) = boundary_pair(&ca, &g, &n).unwrap();
        let (sb, tb) = boundary_pair(&cb, &g, &n).unwrap();
        let (s, t) = boundary_pair(&ca.add(&cb, &n), &g, &n).unwrap();
        prop_assert_eq!(s.carrier(), Carrier::Vertices);
        prop_assert_eq!(s, sa.add(&sb, &n));
        prop_assert_eq!(t, ta.add(&tb, &n));
    }

    #[test]
    fn cycles_are_closed_under_addition((g, a, b) in circulations()) {
        let n = nat();
        let (ca, cb) = (nat_chain(&a), nat_chain(&b));
        prop_assert!(is_cycle(&ca, &g, &n).unwrap());
        prop_assert!(is_cycle(&ca.add(&cb, &n), &g, &n).unwrap());
    }

    #[test]
    fn decomposition_resums((g, c, _) in circulations()) {
        let parts = decompose_cycle(&nat_chain(&c), &g).unwrap();
        let mut sum = vec![0usize; g.edge_count()];
        for (l, k) in &parts {
            prop_assert!(is_simple_loop(&g, l.edges()));
            let k: usize = k.try_into().unwrap();
            prop_assert!(k > 0);
            for &e in l.edges() {
                sum[e] += k;
            }
        }
        prop_assert_eq!(sum, c);
    }

    #[test]
    fn feedback_is_additive((g, a, b) in circulations(), labels in prop::collection::vec(-5i64..=5, 7)) {
        let z = Arc::new(LabelAlgebra::builtin(Builtin::IntAdd));
        let values = (0..g.edge_count()).map(|e| Elem::int(labels[e])).collect();
        let lg = LabeledGraph::new(g, z.clone(), values).unwrap();
        let n = nat();
        let (ca, cb) = (nat_chain(&a), nat_chain(&b));
        let whole = feedback(&ca.add(&cb, &n), &lg).unwrap();
        let parts = z.add(&feedback(&ca, &lg).unwrap(), &feedback(&cb, &lg).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn zero_chain_is_a_cycle(g in graph()) {
        prop_assert!(is_cycle(&Chain::zero(Carrier::Edges), &g, &nat()).unwrap());
    }

    #[test]
    fn collapse_is_idempotent_and_alternating(w in word()) {
        let c = w.collapse();
        prop_assert_eq!(c.collapse(), c.clone());
        prop_assert!(c.is_alternating());
        prop_assert!(c.len() <= w.len());
        prop_assert_eq!(c.is_empty(), w.is_empty());
        prop_assert_eq!(w.is_alternating(), c == w);
    }

    #[test]
    fn compose_and_tensor_add_edges(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sign = Arc::new(LabelAlgebra::sign());
        let (a, b, c) = (foot("a", r.gen_range(0..3)), foot("b", r.gen_range(0..3)), foot("c", r.gen_range(0..3)));
        let x = open_graph(&mut r, &sign, 4, 5, &a, &b, false);
        let y = open_graph(&mut r, &sign, 4, 5, &b, &c, false);
        let edges = |g: &polarity_graphs::open::OpenGraph| g.inner().graph().edge_count();
        let xy = compose(&x, &y).unwrap();
        prop_assert_eq!(edges(&xy), edges(&x) + edges(&y));
        prop_assert_eq!(xy.left_foot(), x.left_foot());
        prop_assert_eq!(xy.right_foot(), y.right_foot());
        let t = tensor(&x, &y).unwrap();
        prop_assert_eq!(edges(&t), edges(&x) + edges(&y));
        prop_assert_eq!(t.inner().graph().vertex_count(), x.inner().graph().vertex_count() + y.inner().graph().vertex_count());
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), v in 1usize..6, e in 0usize..8) {
        let mut r = rng(seed);
        let g = multigraph(&mut r, v, e);
        let g = random_labels(&mut r, g, &Arc::new(LabelAlgebra::sign_zero()));
        let text = emit(&graph_file(&g));
        let back = load(&text).unwrap().graph.unwrap();
        prop_assert_eq!(back.graph(), g.graph());
        prop_assert_eq!(back.labels(), g.labels());
        prop_assert_eq!(emit(&parse(&text).unwrap()), text);
    }

    #[test]
    fn open_graph_files_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sign = Arc::new(LabelAlgebra::sign());
        let x = open_graph(&mut r, &sign, 4, 5, &foot("p", 2), &foot("q", 1), false);
        let text = emit(&open_graph_file(&x));
        let back = load(&text).unwrap().open_graph.unwrap();
        prop_assert_eq!(back.inner().graph(), x.inner().graph());
        prop_assert_eq!(back.leg_in(), x.leg_in());
        prop_assert_eq!(back.leg_out(), x.leg_out());
        prop_assert_eq!(back.right_foot(), x.right_foot());
    }
}
