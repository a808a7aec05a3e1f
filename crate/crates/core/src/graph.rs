//! Finite directed multigraphs, labelings, graph morphisms and the
//! operations that move labelings along them.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{Elem, Flags, LabelAlgebra, MonoidHom};
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;
use crate::Verdict;

/// Largest transformation monoid materialized by [`from_semiautomaton`].
pub const SEMIAUTOMATON_LIMIT: usize = 5000;

/// A finite directed multigraph. Parallel edges and self-loops are allowed.
///
/// Vertices and edges are numbered from 0; names are for display only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
}

impl Graph {
    /// `n` vertices named `v0`, `v1`, ... and no edges.
    pub fn with_vertices(n: usize) -> Self {
        Graph { vertex_names: (0..n).map(|i| format!("v{i}")).collect(), ..Default::default() }
    }

    /// A graph from vertex names and `(src, tgt)` pairs. Edges are named
    /// `e1`, `e2`, ... in order.
    pub fn new(vertex_names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph { vertex_names, ..Default::default() };
        for &(s, t) in edges {
            g.add_edge(s, t)?;
        }
        Ok(g)
    }

    /// Convenience constructor from string names, e.g. `[("u", "v")]`.
    pub fn from_names(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let lookup = |s: &str| {
            vertices
                .iter()
                .position(|v| *v == s)
                .ok_or_else(|| Error::invalid("edge", format!("unknown vertex `{s}`")))
        };
        let pairs = edges
            .iter()
            .map(|(s, t)| Ok((lookup(s)?, lookup(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(names, &pairs)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> usize {
        self.vertex_names.push(name.into());
        self.vertex_names.len() - 1
    }

    pub fn add_edge(&mut self, s: usize, t: usize) -> Result<usize> {
        let name = format!("e{}", self.src.len() + 1);
        self.add_named_edge(name, s, t)
    }

    pub fn add_named_edge(&mut self, name: impl Into<String>, s: usize, t: usize) -> Result<usize> {
        for v in [s, t] {
            if v >= self.vertex_count() {
                return Err(Error::Dangling { kind: "vertex", id: v });
            }
        }
        self.src.push(s);
        self.tgt.push(t);
        self.edge_names.push(name.into());
        Ok(self.src.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, e: usize) -> usize {
        self.src[e]
    }

    pub fn tgt(&self, e: usize) -> usize {
        self.tgt[e]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn set_vertex_name(&mut self, v: usize, name: impl Into<String>) {
        self.vertex_names[v] = name.into();
    }

    pub fn set_edge_name(&mut self, e: usize, name: impl Into<String>) {
        self.edge_names[e] = name.into();
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    /// Edges leaving `v`, in id order.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.edge_count()).filter(move |&e| self.src[e] == v)
    }

    /// Outgoing edge lists for every vertex.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in 0..self.edge_count() {
            adj[self.src[e]].push(e);
        }
        adj
    }

    /// Disjoint union; the second graph's ids are shifted past the first's.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.vertex_count();
        let mut g = self.clone();
        g.vertex_names.extend(other.vertex_names.iter().cloned());
        g.edge_names.extend(other.edge_names.iter().cloned());
        g.src.extend(other.src.iter().map(|v| v + n));
        g.tgt.extend(other.tgt.iter().map(|v| v + n));
        g
    }
}

/// Partition of the vertices into undirected connected components.
///
/// Blocks are sorted and listed in order of their smallest vertex.
pub fn undirected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in 0..g.edge_count() {
        uf.union(g.src(e), g.tgt(e));
    }
    let (class, count) = uf.classes();
    let mut blocks = vec![Vec::new(); count];
    for (v, c) in class.into_iter().enumerate() {
        blocks[c].push(v);
    }
    blocks
}

/// A graph whose edges carry elements of a label algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    graph: Graph,
    algebra: Arc<LabelAlgebra>,
    labels: Vec<Elem>,
}

impl LabeledGraph {
    pub fn new(graph: Graph, algebra: Arc<LabelAlgebra>, labels: Vec<Elem>) -> Result<Self> {
        if labels.len() != graph.edge_count() {
            return Err(Error::malformed(
                "labeling",
                format!("{} labels for {} edges", labels.len(), graph.edge_count()),
            ));
        }
        if let Some(e) = labels.iter().position(|x| !algebra.contains(x)) {
            return Err(Error::UnknownElement {
                algebra: algebra.name().to_string(),
                name: format!("{:?} on edge {}", labels[e], graph.edge_name(e)),
            });
        }
        Ok(LabeledGraph { graph, algebra, labels })
    }

    /// Labels given by display name.
    pub fn from_names(graph: Graph, algebra: Arc<LabelAlgebra>, labels: &[&str]) -> Result<Self> {
        let labels = labels.iter().map(|s| algebra.parse_elem(s)).collect::<Result<Vec<_>>>()?;
        Self::new(graph, algebra, labels)
    }

    /// Every edge labeled with the unit.
    pub fn unit_labeled(graph: Graph, algebra: Arc<LabelAlgebra>) -> Self {
        let labels = vec![algebra.unit(); graph.edge_count()];
        LabeledGraph { graph, algebra, labels }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn algebra(&self) -> &Arc<LabelAlgebra> {
        &self.algebra
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    pub fn label(&self, e: usize) -> &Elem {
        &self.labels[e]
    }

    pub fn label_name(&self, e: usize) -> String {
        self.algebra.show(&self.labels[e])
    }

    pub fn into_parts(self) -> (Graph, Arc<LabelAlgebra>, Vec<Elem>) {
        (self.graph, self.algebra, self.labels)
    }

    pub fn disjoint_union(&self, other: &LabeledGraph) -> Result<LabeledGraph> {
        same_algebra(&self.algebra, &other.algebra)?;
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(LabeledGraph { graph: self.graph.disjoint_union(&other.graph), algebra: self.algebra.clone(), labels })
    }
}

pub(crate) fn same_algebra(a: &LabelAlgebra, b: &LabelAlgebra) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch { expected: a.name().to_string(), found: b.name().to_string() })
    }
}

/// A graph morphism given by its vertex map `f0` and edge map `f1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphMorphism {
    pub f0: Vec<usize>,
    pub f1: Vec<usize>,
}

/// A place where a morphism fails to commute with source or target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareFailure {
    Source { edge: usize },
    Target { edge: usize },
}

impl GraphMorphism {
    pub fn identity(g: &Graph) -> Self {
        GraphMorphism { f0: (0..g.vertex_count()).collect(), f1: (0..g.edge_count()).collect() }
    }

    /// Checks that the maps are total and in range. Used by every other
    /// operation before it looks at the squares.
    pub fn check_shape(&self, src: &Graph, dst: &Graph) -> Result<()> {
        if self.f0.len() != src.vertex_count() {
            return Err(Error::malformed("morphism", format!("f0 has {} entries for {} vertices", self.f0.len(), src.vertex_count())));
        }
        if self.f1.len() != src.edge_count() {
            return Err(Error::malformed("morphism", format!("f1 has {} entries for {} edges", self.f1.len(), src.edge_count())));
        }
        if let Some(&v) = self.f0.iter().find(|&&v| v >= dst.vertex_count()) {
            return Err(Error::Dangling { kind: "vertex", id: v });
        }
        if let Some(&e) = self.f1.iter().find(|&&e| e >= dst.edge_count()) {
            return Err(Error::Dangling { kind: "edge", id: e });
        }
        Ok(())
    }

    /// Every edge at which `f0∘s = s'∘f1` or `f0∘t = t'∘f1` fails.
    pub fn validate(&self, src: &Graph, dst: &Graph) -> Result<Vec<SquareFailure>> {
        self.check_shape(src, dst)?;
        let mut out = Vec::new();
        for e in 0..src.edge_count() {
            let image = self.f1[e];
            if self.f0[src.src(e)] != dst.src(image) {
                out.push(SquareFailure::Source { edge: e });
            }
            if self.f0[src.tgt(e)] != dst.tgt(image) {
                out.push(SquareFailure::Target { edge: e });
            }
        }
        Ok(out)
    }

    pub fn is_valid(&self, src: &Graph, dst: &Graph) -> Result<bool> {
        Ok(self.validate(src, dst)?.is_empty())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GraphMorphism) -> GraphMorphism {
        GraphMorphism {
            f0: self.f0.iter().map(|&v| next.f0[v]).collect(),
            f1: self.f1.iter().map(|&e| next.f1[e]).collect(),
        }
    }
}

fn require_valid(m: &GraphMorphism, src: &Graph, dst: &Graph) -> Result<()> {
    match m.validate(src, dst)?.first() {
        None => Ok(()),
        Some(SquareFailure::Source { edge } | SquareFailure::Target { edge }) => {
            Err(Error::invalid("morphism", format!("squares fail at edge {}", src.edge_name(*edge))))
        }
    }
}

/// Whether `ℓ'(f1(e)) = ℓ(e)` for every edge; on failure, the first edge
/// where it does not.
pub fn is_label_preserving(m: &GraphMorphism, src: &LabeledGraph, dst: &LabeledGraph) -> Result<Verdict<usize>> {
    same_algebra(&src.algebra, &dst.algebra)?;
    require_valid(m, &src.graph, &dst.graph)?;
    Ok(match (0..src.graph.edge_count()).find(|&e| dst.labels[m.f1[e]] != src.labels[e]) {
        None => Verdict::Holds,
        Some(e) => Verdict::Fails(e),
    })
}

/// Labels `src` by `ℓ∘f1`, the unique labeling that makes `m`
/// label-preserving.
pub fn pullback_labeling(m: &GraphMorphism, src: &Graph, dst: &LabeledGraph) -> Result<LabeledGraph> {
    require_valid(m, src, &dst.graph)?;
    let labels = m.f1.iter().map(|&e| dst.labels[e].clone()).collect();
    Ok(LabeledGraph { graph: src.clone(), algebra: dst.algebra.clone(), labels })
}

/// The same graph with every label sent through `h`.
pub fn change_labels(h: &MonoidHom, g: &LabeledGraph) -> Result<LabeledGraph> {
    same_algebra(h.source(), &g.algebra)?;
    let labels = g.labels.iter().map(|x| h.apply(x)).collect::<Result<Vec<_>>>()?;
    Ok(LabeledGraph { graph: g.graph.clone(), algebra: h.target().clone(), labels })
}

/// Which morphism notion a label-changing square is checked against.
#[derive(Debug, Clone, Copy)]
pub enum MorphismRef<'a> {
    Set(&'a GraphMorphism),
    Additive(&'a GraphMorphism),
    Kleisli(&'a crate::paths::KleisliMorphism),
}

/// Whether `(phi, m)` is a morphism from `src` to `dst` in the category of
/// all labeled graphs of the given kind: in set mode `ℓ'∘f1 = φ∘ℓ`, in
/// additive mode the pushforward of `φ∘ℓ` equals `ℓ'`, in Kleisli mode
/// each edge's image path has grade `φ(ℓ(e))`.
pub fn grothendieck_morphism_check(
    phi: &MonoidHom,
    m: MorphismRef<'_>,
    src: &LabeledGraph,
    dst: &LabeledGraph,
) -> Result<bool> {
    let relabeled = change_labels(phi, src)?;
    match m {
        MorphismRef::Set(m) => Ok(is_label_preserving(m, &relabeled, dst)?.holds()),
        MorphismRef::Additive(m) => {
            Ok(crate::additive::is_additive_morphism(m, &relabeled, dst)?.holds())
        }
        MorphismRef::Kleisli(k) => Ok(crate::paths::is_kleisli_morphism(k, &relabeled, dst)?.holds()),
    }
}

/// A semiautomaton: states, inputs and a total action of each input on
/// the states. `action[a][v]` is the state reached from `v` on input `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semiautomaton {
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub action: Vec<Vec<usize>>,
}

/// The transition graph of a semiautomaton, labeled in the transformation
/// monoid generated by its inputs.
///
/// The edge for input `a` at state `v` has id `a·|V| + v`. Monoid elements
/// are named by their image lists, like `[1,0]`; the identity comes first.
/// The product `f·g` is "first g, then f", so a path's grade is the
/// composite transformation.
pub fn from_semiautomaton(sa: &Semiautomaton) -> Result<LabeledGraph> {
    let n = sa.states.len();
    if sa.action.len() != sa.inputs.len() {
        return Err(Error::malformed("semiautomaton", "one action row per input is required"));
    }
    for row in &sa.action {
        if row.len() != n {
            return Err(Error::malformed("semiautomaton", "action rows must cover every state"));
        }
        if let Some(&s) = row.iter().find(|&&s| s >= n) {
            return Err(Error::Dangling { kind: "state", id: s });
        }
    }
    let mut elems: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut generator_idx = Vec::new();
    for g in &sa.action {
        let i = *index.entry(g.clone()).or_insert_with(|| {
            elems.push(g.clone());
            elems.len() - 1
        });
        generator_idx.push(i);
    }
    let mut frontier = 0;
    while frontier < elems.len() {
        if elems.len() > SEMIAUTOMATON_LIMIT {
            return Err(Error::GuardExceeded { what: "transformation monoid size", limit: SEMIAUTOMATON_LIMIT as u64 });
        }
        let f = elems[frontier].clone();
        for g in &sa.action {
            let gf: Vec<usize> = f.iter().map(|&v| g[v]).collect();
            if !index.contains_key(&gf) {
                index.insert(gf.clone(), elems.len());
                elems.push(gf);
            }
        }
        frontier += 1;
    }
    if elems.len() > SEMIAUTOMATON_LIMIT {
        return Err(Error::GuardExceeded { what: "transformation monoid size", limit: SEMIAUTOMATON_LIMIT as u64 });
    }
    let mul: Vec<Vec<usize>> = elems
        .iter()
        .map(|f| elems.iter().map(|g| index[&g.iter().map(|&v| f[v]).collect::<Vec<_>>()]).collect())
        .collect();
    let names = elems
        .iter()
        .map(|f| format!("[{}]", f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let commutative = (0..mul.len()).all(|a| (0..a).all(|b| mul[a][b] == mul[b][a]));
    let algebra = LabelAlgebra::from_table(
        "Transformations",
        names,
        mul,
        0,
        Flags { commutative, cancellative: false },
    )?;
    let mut graph = Graph { vertex_names: sa.states.clone(), ..Default::default() };
    let mut labels = Vec::new();
    for (a, input) in sa.inputs.iter().enumerate() {
        for v in 0..n {
            graph.add_named_edge(format!("{input}@{}", sa.states[v]), v, sa.action[a][v])?;
            labels.push(Elem::Idx(generator_idx[a]));
        }
    }
    LabeledGraph::new(graph, Arc::new(algebra), labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Builtin;

    fn refinement() -> (LabeledGraph, LabeledGraph, GraphMorphism) {
        let sign = Arc::new(LabelAlgebra::sign());
        let fine = Graph::from_names(
            &["egg sales", "milk sales", "profits"],
            &[("egg sales", "profits"), ("milk sales", "profits")],
        )
        .unwrap();
        let coarse = Graph::from_names(&["sales", "profits"], &[("sales", "profits")]).unwrap();
        let fine = LabeledGraph::from_names(fine, sign.clone(), &["+", "+"]).unwrap();
        let coarse = LabeledGraph::from_names(coarse, sign, &["+"]).unwrap();
        (fine, coarse, GraphMorphism { f0: vec![0, 0, 1], f1: vec![0, 0] })
    }

    #[test]
    fn refinement_is_label_preserving() {
        let (fine, coarse, m) = refinement();
        assert!(m.is_valid(fine.graph(), coarse.graph()).unwrap());
        assert!(is_label_preserving(&m, &fine, &coarse).unwrap().holds());
        let minus = LabeledGraph::from_names(coarse.graph().clone(), coarse.algebra().clone(), &["-"]).unwrap();
        assert_eq!(is_label_preserving(&m, &fine, &minus).unwrap(), Verdict::Fails(0));
        let pulled = pullback_labeling(&m, fine.graph(), &coarse).unwrap();
        assert_eq!(pulled, fine);
    }

    #[test]
    fn broken_square_is_reported() {
        let (fine, coarse, _) = refinement();
        let m = GraphMorphism { f0: vec![1, 0, 1], f1: vec![0, 0] };
        assert_eq!(
            m.validate(fine.graph(), coarse.graph()).unwrap(),
            vec![SquareFailure::Source { edge: 0 }]
        );
        let dangling = GraphMorphism { f0: vec![0, 0, 9], f1: vec![0, 0] };
        assert!(matches!(dangling.validate(fine.graph(), coarse.graph()), Err(Error::Dangling { .. })));
    }

    #[test]
    fn components() {
        let g2 = Graph::from_names(&["u", "v", "w"], &[("u", "v"), ("v", "u")]).unwrap();
        assert_eq!(undirected_components(&g2), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn semiautomata() {
        let one = Semiautomaton { states: vec!["s".into()], inputs: vec!["a".into()], action: vec![vec![0]] };
        let g = from_semiautomaton(&one).unwrap();
        assert_eq!(g.algebra().size(), Some(1));
        assert_eq!(g.graph().edge_count(), 1);

        let swap = Semiautomaton {
            states: vec!["0".into(), "1".into()],
            inputs: vec!["swap".into()],
            action: vec![vec![1, 0]],
        };
        let g = from_semiautomaton(&swap).unwrap();
        assert_eq!(g.algebra().size(), Some(2));
        assert!(crate::algebra::find_isomorphism(g.algebra(), &LabelAlgebra::cyclic(2).unwrap()).is_some());

        let both = Semiautomaton {
            states: vec!["0".into(), "1".into()],
            inputs: vec!["swap".into(), "const0".into()],
            action: vec![vec![1, 0], vec![0, 0]],
        };
        let g = from_semiautomaton(&both).unwrap();
        assert_eq!(g.algebra().size(), Some(4));
        assert_eq!(g.graph().edge_count(), 4);
        assert!(g.algebra().validate().is_valid());
    }

    #[test]
    fn grothendieck_modes() {
        let (fine, coarse, m) = refinement();
        let id = MonoidHom::identity(fine.algebra().clone());
        assert!(grothendieck_morphism_check(&id, MorphismRef::Set(&m), &fine, &coarse).unwrap());
        let collapse = MonoidHom::collapse(fine.algebra().clone());
        let target = change_labels(&collapse, &coarse).unwrap();
        assert!(grothendieck_morphism_check(&collapse, MorphismRef::Set(&m), &fine, &target).unwrap());

        let q = Arc::new(LabelAlgebra::builtin(Builtin::RatMulMonoid));
        let g = Graph::from_names(&["hours", "sales"], &[("hours", "sales"), ("hours", "sales")]).unwrap();
        let g = LabeledGraph::from_names(g, q, &["150", "25"]).unwrap();
        let sign = MonoidHom::sign();
        let signed = change_labels(&sign, &g).unwrap();
        assert_eq!(signed.label_name(0), "+");
        assert_eq!(signed.label_name(1), "+");
        let id = GraphMorphism::identity(g.graph());
        assert!(grothendieck_morphism_check(&sign, MorphismRef::Set(&id), &g, &signed).unwrap());
    }
}
