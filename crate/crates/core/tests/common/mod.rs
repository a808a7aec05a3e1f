//! Random generators and brute-force oracles shared by the integration
//! tests. Oracles here deliberately avoid the library's own search code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use polarity_graphs::algebra::{Elem, Flags, LabelAlgebra};
use polarity_graphs::homology::{Carrier, Chain};
use polarity_graphs::open::{GraphIso, OpenGraph};
use polarity_graphs::{Graph, GraphMorphism, LabeledGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A multigraph with loops and parallel edges allowed.
pub fn multigraph(rng: &mut ChaCha8Rng, vertices: usize, edges: usize) -> Graph {
    let mut g = Graph::with_vertices(vertices);
    for _ in 0..edges {
        let (s, t) = (rng.gen_range(0..vertices), rng.gen_range(0..vertices));
        g.add_edge(s, t).unwrap();
    }
    g
}

pub fn random_labels(rng: &mut ChaCha8Rng, g: Graph, alg: &Arc<LabelAlgebra>) -> LabeledGraph {
    let elements = alg.elements().expect("finite algebra");
    let labels = (0..g.edge_count()).map(|_| elements.choose(rng).unwrap().clone()).collect();
    LabeledGraph::new(g, alg.clone(), labels).unwrap()
}

/// Every assignment of `0..base` to `digits` positions.
pub fn assignments(digits: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..digits {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..base).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Edge-coefficient vectors of all ℕ-circulations with entries ≤ bound.
pub fn circulations(g: &Graph, bound: usize) -> Vec<Vec<usize>> {
    assignments(g.edge_count(), bound + 1)
        .into_iter()
        .filter(|c| {
            let mut net = vec![0i64; g.vertex_count()];
            for (e, &k) in c.iter().enumerate() {
                net[g.src(e)] += k as i64;
                net[g.tgt(e)] -= k as i64;
            }
            net.iter().all(|&x| x == 0)
        })
        .collect()
}

/// Nonzero vectors with no other nonzero vector below them.
pub fn minimal_vectors(vs: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let nonzero: Vec<&Vec<usize>> = vs.iter().filter(|v| v.iter().any(|&x| x > 0)).collect();
    nonzero
        .iter()
        .filter(|v| !nonzero.iter().any(|w| w != *v && w.iter().zip(v.iter()).all(|(a, b)| a <= b)))
        .map(|v| (*v).clone())
        .collect()
}

/// An ℕ-chain as a dense coefficient vector.
pub fn dense(c: &Chain, edges: usize) -> Vec<usize> {
    (0..edges)
        .map(|e| match c.coeff(e) {
            Some(Elem::Int(n)) => n.try_into().unwrap(),
            None => 0,
            Some(other) => panic!("not an ℕ coefficient: {other:?}"),
        })
        .collect()
}

pub fn nat_chain(v: &[usize]) -> Chain {
    let terms: Vec<(usize, u64)> = v.iter().enumerate().map(|(e, &k)| (e, k as u64)).collect();
    Chain::nat(Carrier::Edges, &terms)
}

/// Whether the edges form a closed walk visiting each vertex once.
pub fn is_simple_loop(g: &Graph, edges: &[usize]) -> bool {
    if edges.is_empty() {
        return false;
    }
    let mut seen = BTreeSet::new();
    for (i, &e) in edges.iter().enumerate() {
        let next = edges[(i + 1) % edges.len()];
        if g.tgt(e) != g.src(next) || !seen.insert(g.src(e)) {
            return false;
        }
    }
    true
}

type BinOp = Box<dyn Fn(usize, usize) -> usize>;

/// Commutative monoid tables from a few families: cyclic groups,
/// max-semilattices, truncated addition, boolean or, multiplication mod n.
pub fn random_commutative_table(rng: &mut ChaCha8Rng) -> LabelAlgebra {
    let n = rng.gen_range(2..=4);
    let (name, op, unit): (String, BinOp, usize) = match rng.gen_range(0..5) {
        0 => (format!("Z/{n}"), Box::new(move |a, b| (a + b) % n), 0),
        1 => (format!("max{n}"), Box::new(|a: usize, b: usize| a.max(b)), 0),
        2 => (format!("trunc{n}"), Box::new(move |a, b| (a + b).min(n - 1)), 0),
        3 => ("or".into(), Box::new(|a: usize, b: usize| a | b), 0),
        _ => (format!("mul{n}"), Box::new(move |a, b| (a * b) % n), 1),
    };
    let size = if name == "or" { 2 } else { n };
    let elements = (0..size).map(|i| i.to_string()).collect();
    let mul = (0..size).map(|a| (0..size).map(|b| op(a, b)).collect()).collect();
    LabelAlgebra::from_table(name, elements, mul, unit, Flags { commutative: true, cancellative: false }).unwrap()
}

/// Cancellativity by exhaustive search over a finite table.
pub fn cancellative(alg: &LabelAlgebra) -> bool {
    let xs = alg.elements().unwrap();
    xs.iter().all(|c| {
        xs.iter()
            .all(|d| c == d || xs.iter().all(|e| alg.add(c, e) != alg.add(d, e)))
    })
}

/// An open graph on at most `max_vertices` vertices with the given feet
/// (points named as given) and arbitrary legs.
pub fn open_graph(
    rng: &mut ChaCha8Rng,
    alg: &Arc<LabelAlgebra>,
    max_vertices: usize,
    max_edges: usize,
    left: &[String],
    right: &[String],
    injective: bool,
) -> OpenGraph {
    let min = if injective { left.len().max(right.len()).max(1) } else { 1 };
    let n = rng.gen_range(min..=max_vertices.max(min));
    let e = rng.gen_range(0..=max_edges);
    let mut g = multigraph(rng, n, e);
    for v in 0..n {
        g.set_vertex_name(v, format!("v{v}"));
    }
    let inner = random_labels(rng, g, alg);
    let leg = |rng: &mut ChaCha8Rng, k: usize| -> Vec<usize> {
        if injective {
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(rng);
            vs.truncate(k);
            vs
        } else {
            (0..k).map(|_| rng.gen_range(0..n)).collect()
        }
    };
    let (li, lo) = (leg(rng, left.len()), leg(rng, right.len()));
    OpenGraph::new(inner, left.to_vec(), li, right.to_vec(), lo).unwrap()
}

pub fn foot(prefix: &str, k: usize) -> Vec<String> {
    (0..k).map(|i| format!("{prefix}{i}")).collect()
}

/// Checks a claimed isomorphism of open graphs directly.
pub fn is_open_iso(iso: &GraphIso, x: &OpenGraph, y: &OpenGraph) -> bool {
    let (gx, gy) = (x.inner().graph(), y.inner().graph());
    let bijective = |map: &[usize], n: usize, m: usize| {
        map.len() == n && n == m && map.iter().collect::<BTreeSet<_>>().len() == n && map.iter().all(|&v| v < m)
    };
    if !bijective(&iso.vertex_map, gx.vertex_count(), gy.vertex_count())
        || !bijective(&iso.edge_map, gx.edge_count(), gy.edge_count())
    {
        return false;
    }
    let edges_ok = (0..gx.edge_count()).all(|e| {
        let f = iso.edge_map[e];
        iso.vertex_map[gx.src(e)] == gy.src(f)
            && iso.vertex_map[gx.tgt(e)] == gy.tgt(f)
            && x.inner().label(e) == y.inner().label(f)
    });
    let legs_ok = |fx: &[String], lx: &[usize], fy: &[String], ly: &[usize]| {
        fx.iter().zip(lx).all(|(p, &v)| {
            fy.iter().position(|q| q == p).map(|i| ly[i]) == Some(iso.vertex_map[v])
        })
    };
    edges_ok
        && legs_ok(x.left_foot(), x.leg_in(), y.left_foot(), y.leg_in())
        && legs_ok(x.right_foot(), x.leg_out(), y.right_foot(), y.leg_out())
}

/// A graph `src` with a morphism onto `dst`: every edge of `src` sits over
/// a chosen edge of `dst`, between vertices in the right fibers.
pub fn over(rng: &mut ChaCha8Rng, dst: &Graph, extra_vertices: usize, edges: usize) -> (Graph, GraphMorphism) {
    let mut f0: Vec<usize> = (0..dst.vertex_count()).collect();
    for _ in 0..extra_vertices {
        f0.push(rng.gen_range(0..dst.vertex_count()));
    }
    f0.shuffle(rng);
    let mut fibers: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &w) in f0.iter().enumerate() {
        fibers.entry(w).or_default().push(v);
    }
    let mut g = Graph::with_vertices(f0.len());
    let mut f1 = Vec::new();
    if dst.edge_count() > 0 {
        for _ in 0..edges {
            let e = rng.gen_range(0..dst.edge_count());
            let s = *fibers[&dst.src(e)].choose(rng).unwrap();
            let t = *fibers[&dst.tgt(e)].choose(rng).unwrap();
            g.add_edge(s, t).unwrap();
            f1.push(e);
        }
    }
    (g, GraphMorphism { f0, f1 })
}

/// Grade of an edge sequence, folded independently: later edges multiply
/// on the left.
pub fn grade_of(g: &LabeledGraph, edges: &[usize]) -> Elem {
    let alg = g.algebra();
    edges.iter().fold(alg.unit(), |acc, &e| alg.mul(g.label(e), &acc))
}

/// All edge sequences of length `1..=max` that form a path from `s` to
/// `t`, by trying every sequence.
pub fn paths_between(g: &Graph, s: usize, t: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for len in 1..=max {
        for seq in assignments(len, g.edge_count()) {
            let chained = seq.windows(2).all(|w| g.tgt(w[0]) == g.src(w[1]));
            if chained && g.src(seq[0]) == s && g.tgt(seq[len - 1]) == t {
                out.push(seq);
            }
        }
    }
    out
}

/// Every Kleisli morphism from `motif` to `host` with edge images of
/// length `1..=max`, as (vertex map, edge paths).
pub fn motif_oracle(motif: &LabeledGraph, host: &LabeledGraph, max: usize) -> BTreeSet<(Vec<usize>, Vec<Vec<usize>>)> {
    let (mg, hg) = (motif.graph(), host.graph());
    let mut out = BTreeSet::new();
    for f0 in assignments(mg.vertex_count(), hg.vertex_count()) {
        let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
        for e in 0..mg.edge_count() {
            let ok: Vec<Vec<usize>> = paths_between(hg, f0[mg.src(e)], f0[mg.tgt(e)], max)
                .into_iter()
                .filter(|p| grade_of(host, p) == *motif.label(e))
                .collect();
            choices.push(ok);
        }
        let mut combos: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for options in &choices {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    options.iter().map(move |p| {
                        let mut c = c.clone();
                        c.push(p.clone());
                        c
                    })
                })
                .collect();
        }
        for c in combos {
            out.insert((f0.clone(), c));
        }
    }
    out
}
