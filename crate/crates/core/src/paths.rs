//! Paths, grades, Kleisli morphisms and motif search.
//!
//! A path's grade is the product of its labels with later edges on the
//! left: the path `e1, e2, ..., en` has grade `ℓ(en)⋯ℓ(e2)·ℓ(e1)`. This
//! only matters for non-commutative algebras such as transformation
//! monoids, where it makes the grade equal to the composite map.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Elem, LabelAlgebra};
use crate::error::{Error, Result};
use crate::graph::{same_algebra, Graph, LabeledGraph};
use crate::Verdict;

/// Default bound on the length of edge images searched by [`find_motifs`].
pub const DEFAULT_MAX_PATH_LEN: usize = 6;

/// A path in a graph: a start vertex and a sequence of edge ids. The empty
/// sequence is the identity path at `start`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub start: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn identity(v: usize) -> Self {
        Path { start: v, edges: Vec::new() }
    }

    /// A path from its edges, checked in `g`. Fails on an empty sequence,
    /// which has no start; use [`Path::identity`] for that.
    pub fn from_edges(g: &Graph, edges: Vec<usize>) -> Result<Self> {
        let first = *edges.first().ok_or_else(|| Error::invalid("path", "empty edge list"))?;
        if first >= g.edge_count() {
            return Err(Error::Dangling { kind: "edge", id: first });
        }
        let p = Path { start: g.src(first), edges };
        p.check(g)?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks that ids exist and consecutive edges meet.
    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.start >= g.vertex_count() {
            return Err(Error::Dangling { kind: "vertex", id: self.start });
        }
        let mut at = self.start;
        for (i, &e) in self.edges.iter().enumerate() {
            if e >= g.edge_count() {
                return Err(Error::Dangling { kind: "edge", id: e });
            }
            if g.src(e) != at {
                return Err(Error::invalid(
                    "path",
                    format!("edge {} at position {i} does not start at {}", g.edge_name(e), g.vertex_name(at)),
                ));
            }
            at = g.tgt(e);
        }
        Ok(())
    }

    /// Final vertex. Assumes the path is valid in `g`.
    pub fn end(&self, g: &Graph) -> usize {
        self.edges.last().map_or(self.start, |&e| g.tgt(e))
    }

    /// Vertices visited, including start and end.
    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        std::iter::once(self.start).chain(self.edges.iter().map(|&e| g.tgt(e))).collect()
    }
}

/// The grade `ℓ(en)⋯ℓ(e1)` of a path; the unit for an identity path.
pub fn grade(p: &Path, g: &LabeledGraph) -> Result<Elem> {
    p.check(g.graph())?;
    Ok(grade_unchecked(&p.edges, g))
}

fn grade_unchecked(edges: &[usize], g: &LabeledGraph) -> Elem {
    let alg = g.algebra();
    edges.iter().fold(alg.unit(), |acc, &e| alg.mul(g.label(e), &acc))
}

/// `p` followed by `q`.
pub fn compose_paths(p: &Path, q: &Path, g: &Graph) -> Result<Path> {
    p.check(g)?;
    q.check(g)?;
    if p.end(g) != q.start {
        return Err(Error::invalid(
            "composition",
            format!("path ends at {} but the next starts at {}", g.vertex_name(p.end(g)), g.vertex_name(q.start)),
        ));
    }
    let mut edges = p.edges.clone();
    edges.extend_from_slice(&q.edges);
    Ok(Path { start: p.start, edges })
}

/// A map of free graded categories, given on generators: each vertex goes
/// to a vertex and each edge to a path of the same grade.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KleisliMorphism {
    pub vertex_map: Vec<usize>,
    pub edge_paths: Vec<Path>,
}

/// The first edge at which a candidate Kleisli morphism goes wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KleisliFailure {
    InvalidPath { edge: usize },
    WrongStart { edge: usize },
    WrongEnd { edge: usize },
    GradeMismatch { edge: usize, expected: Elem, found: Elem },
}

impl KleisliFailure {
    pub fn edge(&self) -> usize {
        match self {
            KleisliFailure::InvalidPath { edge }
            | KleisliFailure::WrongStart { edge }
            | KleisliFailure::WrongEnd { edge }
            | KleisliFailure::GradeMismatch { edge, .. } => *edge,
        }
    }
}

impl KleisliMorphism {
    pub fn identity(g: &Graph) -> Self {
        KleisliMorphism {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_paths: (0..g.edge_count()).map(|e| Path { start: g.src(e), edges: vec![e] }).collect(),
        }
    }

    /// Image of a whole path: the concatenation of its edges' images.
    pub fn apply_path(&self, p: &Path) -> Path {
        let mut edges = Vec::new();
        for &e in &p.edges {
            edges.extend_from_slice(&self.edge_paths[e].edges);
        }
        Path { start: self.vertex_map[p.start], edges }
    }

    /// `next ∘ self`, substituting paths into paths.
    pub fn then(&self, next: &KleisliMorphism) -> KleisliMorphism {
        KleisliMorphism {
            vertex_map: self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
            edge_paths: self.edge_paths.iter().map(|p| next.apply_path(p)).collect(),
        }
    }

    pub(crate) fn check_shape(&self, src: &Graph, dst: &Graph) -> Result<()> {
        if self.vertex_map.len() != src.vertex_count() || self.edge_paths.len() != src.edge_count() {
            return Err(Error::malformed("Kleisli morphism", "maps must cover every vertex and edge"));
        }
        if let Some(&v) = self.vertex_map.iter().find(|&&v| v >= dst.vertex_count()) {
            return Err(Error::Dangling { kind: "vertex", id: v });
        }
        Ok(())
    }
}

/// Whether `k` is a Kleisli morphism from `src` to `dst`.
///
/// Mismatched algebras or maps of the wrong length are errors; a failing
/// edge is a [`Verdict::Fails`] witness.
pub fn is_kleisli_morphism(
    k: &KleisliMorphism,
    src: &LabeledGraph,
    dst: &LabeledGraph,
) -> Result<Verdict<KleisliFailure>> {
    same_algebra(src.algebra(), dst.algebra())?;
    k.check_shape(src.graph(), dst.graph())?;
    let (sg, dg) = (src.graph(), dst.graph());
    for e in 0..sg.edge_count() {
        let p = &k.edge_paths[e];
        if p.check(dg).is_err() {
            return Ok(Verdict::Fails(KleisliFailure::InvalidPath { edge: e }));
        }
        if p.start != k.vertex_map[sg.src(e)] {
            return Ok(Verdict::Fails(KleisliFailure::WrongStart { edge: e }));
        }
        if p.end(dg) != k.vertex_map[sg.tgt(e)] {
            return Ok(Verdict::Fails(KleisliFailure::WrongEnd { edge: e }));
        }
        let found = grade_unchecked(&p.edges, dst);
        if found != *src.label(e) {
            return Ok(Verdict::Fails(KleisliFailure::GradeMismatch { edge: e, expected: src.label(e).clone(), found }));
        }
    }
    Ok(Verdict::Holds)
}

/// Bounds for [`find_motifs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotifQuery {
    pub max_path_len: usize,
    pub max_results: usize,
    /// Allow an edge to map to an identity path (grade must then be the
    /// unit). Off by default, so every motif edge lands on at least one
    /// host edge.
    pub allow_identity_paths: bool,
}

impl Default for MotifQuery {
    fn default() -> Self {
        MotifQuery { max_path_len: DEFAULT_MAX_PATH_LEN, max_results: 1000, allow_identity_paths: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifSearch {
    pub matches: Vec<KleisliMorphism>,
    pub truncated: bool,
}

/// Graded paths keyed by (source, target).
type PathTable = BTreeMap<(usize, usize), Vec<(Vec<usize>, Elem)>>;

/// Every path of length in `min..=max` between each ordered vertex pair,
/// grouped by endpoints and sorted by edge sequence.
fn bounded_paths(g: &LabeledGraph, min: usize, max: usize) -> PathTable {
    let graph = g.graph();
    let adj = graph.adjacency();
    let mut out: PathTable = BTreeMap::new();
    fn walk(
        g: &LabeledGraph,
        adj: &[Vec<usize>],
        start: usize,
        at: usize,
        edges: &mut Vec<usize>,
        grade: Elem,
        bounds: (usize, usize),
        out: &mut PathTable,
    ) {
        if edges.len() >= bounds.0 {
            out.entry((start, at)).or_default().push((edges.clone(), grade.clone()));
        }
        if edges.len() == bounds.1 {
            return;
        }
        for &e in &adj[at] {
            edges.push(e);
            let next = g.algebra().mul(g.label(e), &grade);
            walk(g, adj, start, g.graph().tgt(e), edges, next, bounds, out);
            edges.pop();
        }
    }
    for v in 0..graph.vertex_count() {
        walk(g, &adj, v, v, &mut Vec::new(), g.algebra().unit(), (min, max), &mut out);
    }
    for list in out.values_mut() {
        list.sort();
    }
    out
}

/// All Kleisli morphisms from `motif` into `host` whose edge images have
/// length at most `max_path_len`, in lexicographic order of (vertex map,
/// edge paths), stopping after `max_results`.
pub fn find_motifs(motif: &LabeledGraph, host: &LabeledGraph, query: MotifQuery) -> Result<MotifSearch> {
    same_algebra(motif.algebra(), host.algebra())?;
    if query.max_path_len == 0 && !query.allow_identity_paths {
        return Err(Error::invalid("motif query", "max_path_len must be at least 1"));
    }
    let min = if query.allow_identity_paths { 0 } else { 1 };
    let paths = bounded_paths(host, min, query.max_path_len);
    let mg = motif.graph();
    let n = mg.vertex_count();
    let hosts = host.graph().vertex_count();
    // Motif edges become checkable once both endpoints are assigned.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..mg.edge_count() {
        ready[mg.src(e).max(mg.tgt(e))].push(e);
    }
    let empty = Vec::new();
    let candidates = |vm: &[usize], e: usize| -> Vec<&Vec<usize>> {
        paths
            .get(&(vm[mg.src(e)], vm[mg.tgt(e)]))
            .unwrap_or(&empty)
            .iter()
            .filter(|(_, g)| g == motif.label(e))
            .map(|(p, _)| p)
            .collect()
    };

    let mut search = MotifSearch { matches: Vec::new(), truncated: false };
    let mut vm = vec![0usize; n];

    fn emit(
        search: &mut MotifSearch,
        vm: &[usize],
        lists: &[Vec<&Vec<usize>>],
        starts: &[usize],
        limit: usize,
    ) -> bool {
        let mut choice = vec![0usize; lists.len()];
        loop {
            if search.matches.len() == limit {
                search.truncated = true;
                return false;
            }
            search.matches.push(KleisliMorphism {
                vertex_map: vm.to_vec(),
                edge_paths: lists
                    .iter()
                    .zip(&choice)
                    .zip(starts)
                    .map(|((l, &c), &s)| Path { start: s, edges: l[c].clone() })
                    .collect(),
            });
            let mut i = lists.len();
            loop {
                if i == 0 {
                    return true;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < lists[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    // Depth-first over vertex assignments in lexicographic order.
    let mut depth = 0usize;
    let mut next_value = vec![0usize; n + 1];
    if n == 0 {
        if mg.edge_count() == 0 && query.max_results > 0 {
            search.matches.push(KleisliMorphism { vertex_map: Vec::new(), edge_paths: Vec::new() });
        } else if query.max_results == 0 {
            search.truncated = true;
        }
        return Ok(search);
    }
    loop {
        if next_value[depth] == hosts {
            if depth == 0 {
                break;
            }
            next_value[depth] = 0;
            depth -= 1;
            continue;
        }
        vm[depth] = next_value[depth];
        next_value[depth] += 1;
        if ready[depth].iter().any(|&e| candidates(&vm, e).is_empty()) {
            continue;
        }
        if depth + 1 < n {
            depth += 1;
            continue;
        }
        let lists: Vec<Vec<&Vec<usize>>> = (0..mg.edge_count()).map(|e| candidates(&vm, e)).collect();
        let starts: Vec<usize> = (0..mg.edge_count()).map(|e| vm[mg.src(e)]).collect();
        if !emit(&mut search, &vm, &lists, &starts, query.max_results) {
            break;
        }
    }
    Ok(search)
}

/// Names accepted by [`builtin_motif`].
pub const MOTIF_NAMES: [&str; 22] = [
    "positive-autoregulation",
    "negative-autoregulation",
    "positive-stimulation",
    "negative-stimulation",
    "positive-feedback-loop",
    "negative-feedback-loop",
    "double-negative-feedback-loop",
    "coherent-feedforward",
    "incoherent-feedforward",
    "double-negative-feedforward",
    "branch-pp",
    "branch-pm",
    "branch-mm",
    "gate-pp",
    "gate-pm",
    "gate-mm",
    "overlapping-feedforward-1",
    "overlapping-feedforward-2",
    "overlapping-feedforward-3",
    "overlapping-feedforward-4",
    "overlapping-feedforward-5",
    "overlapping-feedforward-6",
];

/// A named motif from the standard catalog of {+,−}-labeled graphs.
pub fn builtin_motif(name: &str) -> Result<LabeledGraph> {
    type Spec = (&'static [&'static str], &'static [(&'static str, &'static str, &'static str)]);
    const VW: &[&str] = &["v", "w"];
    const UVW: &[&str] = &["u", "v", "w"];
    let (vertices, edges): Spec = match name {
        "positive-autoregulation" => (&["v"], &[("v", "v", "+")]),
        "negative-autoregulation" => (&["v"], &[("v", "v", "-")]),
        "positive-stimulation" => (VW, &[("v", "w", "+")]),
        "negative-stimulation" => (VW, &[("w", "v", "-")]),
        "positive-feedback-loop" => (VW, &[("v", "w", "+"), ("w", "v", "+")]),
        "negative-feedback-loop" => (VW, &[("v", "w", "+"), ("w", "v", "-")]),
        "double-negative-feedback-loop" => (VW, &[("v", "w", "-"), ("w", "v", "-")]),
        "coherent-feedforward" => (VW, &[("v", "w", "+"), ("v", "w", "+")]),
        "incoherent-feedforward" => (VW, &[("v", "w", "+"), ("v", "w", "-")]),
        "double-negative-feedforward" => (VW, &[("v", "w", "-"), ("v", "w", "-")]),
        "branch-pp" => (UVW, &[("u", "v", "+"), ("u", "w", "+")]),
        "branch-pm" => (UVW, &[("u", "v", "+"), ("u", "w", "-")]),
        "branch-mm" => (UVW, &[("u", "v", "-"), ("u", "w", "-")]),
        "gate-pp" => (UVW, &[("v", "u", "+"), ("w", "u", "+")]),
        "gate-pm" => (UVW, &[("v", "u", "+"), ("w", "u", "-")]),
        "gate-mm" => (UVW, &[("v", "u", "-"), ("w", "u", "-")]),
        "overlapping-feedforward-1" => {
            (UVW, &[("v", "u", "+"), ("v", "w", "+"), ("v", "w", "+"), ("w", "u", "+")])
        }
        "overlapping-feedforward-2" => {
            (UVW, &[("v", "u", "+"), ("v", "w", "+"), ("v", "w", "+"), ("w", "u", "-")])
        }
        "overlapping-feedforward-3" => {
            (UVW, &[("v", "u", "-"), ("v", "w", "+"), ("v", "w", "+"), ("w", "u", "-")])
        }
        "overlapping-feedforward-4" => {
            (UVW, &[("u", "v", "+"), ("u", "w", "+"), ("v", "w", "-"), ("v", "w", "+")])
        }
        "overlapping-feedforward-5" => {
            (UVW, &[("u", "v", "+"), ("u", "w", "-"), ("v", "w", "-"), ("v", "w", "+")])
        }
        "overlapping-feedforward-6" => {
            (UVW, &[("u", "v", "-"), ("u", "w", "-"), ("v", "w", "-"), ("v", "w", "+")])
        }
        _ => return Err(Error::invalid("motif name", name.to_string())),
    };
    let pairs: Vec<(&str, &str)> = edges.iter().map(|(s, t, _)| (*s, *t)).collect();
    let labels: Vec<&str> = edges.iter().map(|(_, _, l)| *l).collect();
    let graph = Graph::from_names(vertices, &pairs)?;
    LabeledGraph::from_names(graph, Arc::new(LabelAlgebra::sign()), &labels)
}
