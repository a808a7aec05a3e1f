//! Open labeled graphs: cospans `A → X ← B` whose feet are bare sets.
//!
//! Composition glues along the shared foot by pushout and tensor is
//! disjoint union. The category laws only hold up to isomorphism, so the
//! module also provides a label-respecting isomorphism search.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::{Elem, LabelAlgebra};
use crate::error::{Error, Result};
use crate::graph::{is_label_preserving, same_algebra, Graph, GraphMorphism, LabeledGraph, SquareFailure};
use crate::paths::{is_kleisli_morphism, KleisliFailure, KleisliMorphism};
use crate::unionfind::UnionFind;
use crate::Verdict;

/// Largest graph accepted by the isomorphism search.
pub const ISO_VERTEX_LIMIT: usize = 12;

/// An open graph from foot `A` to foot `B`. Legs need not be injective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenGraph {
    inner: LabeledGraph,
    left_foot: Vec<String>,
    right_foot: Vec<String>,
    leg_in: Vec<usize>,
    leg_out: Vec<usize>,
}

fn check_foot(name: &'static str, foot: &[String], leg: &[usize], vertices: usize) -> Result<()> {
    if foot.len() != leg.len() {
        return Err(Error::malformed("open graph", format!("{name} has {} points but {} leg entries", foot.len(), leg.len())));
    }
    if foot.iter().collect::<BTreeSet<_>>().len() != foot.len() {
        return Err(Error::malformed("open graph", format!("{name} repeats a point")));
    }
    if let Some(&v) = leg.iter().find(|&&v| v >= vertices) {
        return Err(Error::Dangling { kind: "vertex", id: v });
    }
    Ok(())
}

impl OpenGraph {
    pub fn new(
        inner: LabeledGraph,
        left_foot: Vec<String>,
        leg_in: Vec<usize>,
        right_foot: Vec<String>,
        leg_out: Vec<usize>,
    ) -> Result<Self> {
        let n = inner.graph().vertex_count();
        check_foot("left foot", &left_foot, &leg_in, n)?;
        check_foot("right foot", &right_foot, &leg_out, n)?;
        Ok(OpenGraph { inner, left_foot, right_foot, leg_in, leg_out })
    }

    /// Feet given as names of inner vertices; each foot point is named
    /// after the vertex it lands on.
    pub fn from_vertex_names(inner: LabeledGraph, left: &[&str], right: &[&str]) -> Result<Self> {
        let lookup = |names: &[&str]| -> Result<Vec<usize>> {
            names
                .iter()
                .map(|n| {
                    inner
                        .graph()
                        .vertex_by_name(n)
                        .ok_or_else(|| Error::invalid("foot", format!("no vertex named `{n}`")))
                })
                .collect()
        };
        let (leg_in, leg_out) = (lookup(left)?, lookup(right)?);
        let own = |names: &[&str]| names.iter().map(|s| s.to_string()).collect();
        Self::new(inner.clone(), own(left), leg_in, own(right), leg_out)
    }

    /// The identity on a foot: the edgeless graph on its points.
    pub fn identity(foot: &[String], algebra: Arc<LabelAlgebra>) -> Self {
        let graph = Graph::new(foot.to_vec(), &[]).expect("no edges");
        let legs: Vec<usize> = (0..foot.len()).collect();
        OpenGraph {
            inner: LabeledGraph::unit_labeled(graph, algebra),
            left_foot: foot.to_vec(),
            right_foot: foot.to_vec(),
            leg_in: legs.clone(),
            leg_out: legs,
        }
    }

    /// The unit for tensor: everything empty.
    pub fn empty(algebra: Arc<LabelAlgebra>) -> Self {
        Self::identity(&[], algebra)
    }

    pub fn inner(&self) -> &LabeledGraph {
        &self.inner
    }

    pub fn left_foot(&self) -> &[String] {
        &self.left_foot
    }

    pub fn right_foot(&self) -> &[String] {
        &self.right_foot
    }

    pub fn leg_in(&self) -> &[usize] {
        &self.leg_in
    }

    pub fn leg_out(&self) -> &[usize] {
        &self.leg_out
    }

    pub fn algebra(&self) -> &Arc<LabelAlgebra> {
        self.inner.algebra()
    }
}

/// A composite together with where each piece landed in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushout {
    pub result: OpenGraph,
    /// Composite vertex of each vertex of the left piece.
    pub left_vertices: Vec<usize>,
    /// Composite vertex of each vertex of the right piece.
    pub right_vertices: Vec<usize>,
    /// Edges of the left piece keep their ids; those of the right piece
    /// are shifted by this offset.
    pub right_edge_offset: usize,
}

fn foot_position(foot: &[String]) -> BTreeMap<&str, usize> {
    foot.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
}

/// Glues `x` and `y` along `x`'s right foot and `y`'s left foot, which
/// must contain the same points (matched by name).
///
/// Vertices are quotiented by union-find with the smallest id as the
/// representative, then renumbered in order of each class's smallest
/// member, left piece first. Edges are all of `x`'s followed by all of
/// `y`'s, with labels unchanged.
pub fn pushout(x: &OpenGraph, y: &OpenGraph) -> Result<Pushout> {
    same_algebra(x.algebra(), y.algebra())?;
    let xs: BTreeSet<&String> = x.right_foot.iter().collect();
    let ys: BTreeSet<&String> = y.left_foot.iter().collect();
    if xs != ys {
        return Err(Error::FootMismatch(format!(
            "right foot {:?} differs from left foot {:?}",
            x.right_foot, y.left_foot
        )));
    }
    let (gx, gy) = (x.inner.graph(), y.inner.graph());
    let nx = gx.vertex_count();
    let mut uf = UnionFind::new(nx + gy.vertex_count());
    let y_pos = foot_position(&y.left_foot);
    for (i, b) in x.right_foot.iter().enumerate() {
        uf.union(x.leg_out[i], nx + y.leg_in[y_pos[b.as_str()]]);
    }
    let (class, count) = uf.classes();
    let mut names = vec![None; count];
    for (v, &c) in class.iter().enumerate() {
        if names[c].is_none() {
            let name = if v < nx { gx.vertex_name(v) } else { gy.vertex_name(v - nx) };
            names[c] = Some(name.to_string());
        }
    }
    let mut graph = Graph::new(names.into_iter().map(Option::unwrap).collect(), &[])?;
    let mut labels = Vec::with_capacity(gx.edge_count() + gy.edge_count());
    for e in 0..gx.edge_count() {
        graph.add_named_edge(gx.edge_name(e), class[gx.src(e)], class[gx.tgt(e)])?;
        labels.push(x.inner.label(e).clone());
    }
    for e in 0..gy.edge_count() {
        graph.add_named_edge(gy.edge_name(e), class[nx + gy.src(e)], class[nx + gy.tgt(e)])?;
        labels.push(y.inner.label(e).clone());
    }
    let inner = LabeledGraph::new(graph, x.algebra().clone(), labels)?;
    let result = OpenGraph {
        inner,
        left_foot: x.left_foot.clone(),
        right_foot: y.right_foot.clone(),
        leg_in: x.leg_in.iter().map(|&v| class[v]).collect(),
        leg_out: y.leg_out.iter().map(|&v| class[nx + v]).collect(),
    };
    Ok(Pushout {
        result,
        left_vertices: class[..nx].to_vec(),
        right_vertices: class[nx..].to_vec(),
        right_edge_offset: gx.edge_count(),
    })
}

/// `x` followed by `y`.
pub fn compose(x: &OpenGraph, y: &OpenGraph) -> Result<OpenGraph> {
    Ok(pushout(x, y)?.result)
}

fn sum_foot(a: &[String], b: &[String]) -> Vec<String> {
    let left: BTreeSet<&String> = a.iter().collect();
    if b.iter().all(|s| !left.contains(s)) {
        a.iter().chain(b).cloned().collect()
    } else {
        a.iter().map(|s| format!("inl:{s}")).chain(b.iter().map(|s| format!("inr:{s}"))).collect()
    }
}

/// Side-by-side placement. Foot names are kept when the two feet are
/// disjoint and tagged `inl:`/`inr:` otherwise.
pub fn tensor(x: &OpenGraph, y: &OpenGraph) -> Result<OpenGraph> {
    let inner = x.inner.disjoint_union(&y.inner)?;
    let n = x.inner.graph().vertex_count();
    Ok(OpenGraph {
        inner,
        left_foot: sum_foot(&x.left_foot, &y.left_foot),
        right_foot: sum_foot(&x.right_foot, &y.right_foot),
        leg_in: x.leg_in.iter().copied().chain(y.leg_in.iter().map(|v| v + n)).collect(),
        leg_out: x.leg_out.iter().copied().chain(y.leg_out.iter().map(|v| v + n)).collect(),
    })
}

/// A label-respecting isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIso {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl GraphIso {
    pub fn as_morphism(&self) -> GraphMorphism {
        GraphMorphism { f0: self.vertex_map.clone(), f1: self.edge_map.clone() }
    }
}

struct IsoSearch<'a> {
    g1: &'a LabeledGraph,
    g2: &'a LabeledGraph,
    /// Sorted labels of edges between each ordered vertex pair.
    between1: BTreeMap<(usize, usize), Vec<&'a Elem>>,
    between2: BTreeMap<(usize, usize), Vec<&'a Elem>>,
    candidates: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

fn between(g: &LabeledGraph) -> BTreeMap<(usize, usize), Vec<&Elem>> {
    let mut m: BTreeMap<(usize, usize), Vec<&Elem>> = BTreeMap::new();
    for e in 0..g.graph().edge_count() {
        m.entry((g.graph().src(e), g.graph().tgt(e))).or_default().push(g.label(e));
    }
    for v in m.values_mut() {
        v.sort();
    }
    m
}

type Signature<'a> = (Vec<&'a Elem>, Vec<&'a Elem>, Vec<&'a Elem>);

fn signatures(g: &LabeledGraph) -> Vec<Signature<'_>> {
    let n = g.graph().vertex_count();
    let mut sig: Vec<Signature<'_>> = vec![(Vec::new(), Vec::new(), Vec::new()); n];
    for e in 0..g.graph().edge_count() {
        let (s, t) = (g.graph().src(e), g.graph().tgt(e));
        if s == t {
            sig[s].2.push(g.label(e));
        } else {
            sig[s].0.push(g.label(e));
            sig[t].1.push(g.label(e));
        }
    }
    for s in &mut sig {
        s.0.sort();
        s.1.sort();
        s.2.sort();
    }
    sig
}

impl IsoSearch<'_> {
    fn pair_ok(&self, a: usize, b: usize) -> bool {
        let (fa, fb) = (self.map[a], self.map[b]);
        let empty = Vec::new();
        self.between1.get(&(a, b)).unwrap_or(&empty) == self.between2.get(&(fa, fb)).unwrap_or(&empty)
            && self.between1.get(&(b, a)).unwrap_or(&empty) == self.between2.get(&(fb, fa)).unwrap_or(&empty)
    }

    fn extend(&mut self, v: usize) -> bool {
        let n = self.map.len();
        if v == n {
            return true;
        }
        for i in 0..self.candidates[v].len() {
            let w = self.candidates[v][i];
            if self.used[w] {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if (0..=v).all(|u| self.pair_ok(u, v)) && self.extend(v + 1) {
                return true;
            }
            self.used[w] = false;
        }
        self.map[v] = usize::MAX;
        false
    }

    fn edge_map(&self) -> Vec<usize> {
        let (a, b) = (self.g1.graph(), self.g2.graph());
        let mut buckets: BTreeMap<(usize, usize, &Elem), Vec<usize>> = BTreeMap::new();
        for e in (0..b.edge_count()).rev() {
            buckets.entry((b.src(e), b.tgt(e), self.g2.label(e))).or_default().push(e);
        }
        (0..a.edge_count())
            .map(|e| {
                let key = (self.map[a.src(e)], self.map[a.tgt(e)], self.g1.label(e));
                buckets.get_mut(&key).and_then(Vec::pop).expect("vertex map respects edge multisets")
            })
            .collect()
    }
}

/// Searches for a label-respecting isomorphism that sends each vertex in
/// `fixed` to its partner. Backtracking, so both graphs are limited to
/// [`ISO_VERTEX_LIMIT`] vertices.
pub fn iso_check_with(g1: &LabeledGraph, g2: &LabeledGraph, fixed: &[(usize, usize)]) -> Result<Option<GraphIso>> {
    let (a, b) = (g1.graph(), g2.graph());
    for g in [a, b] {
        if g.vertex_count() > ISO_VERTEX_LIMIT {
            return Err(Error::GuardExceeded { what: "isomorphism search vertex count", limit: ISO_VERTEX_LIMIT as u64 });
        }
    }
    if g1.algebra() != g2.algebra() || a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let (s1, s2) = (signatures(g1), signatures(g2));
    let n = a.vertex_count();
    let mut forced: Vec<Option<usize>> = vec![None; n];
    for &(v, w) in fixed {
        if v >= n || w >= n {
            return Err(Error::Dangling { kind: "vertex", id: v.max(w) });
        }
        match forced[v] {
            Some(x) if x != w => return Ok(None),
            _ => forced[v] = Some(w),
        }
    }
    let candidates = (0..n)
        .map(|v| match forced[v] {
            Some(w) => if s1[v] == s2[w] { vec![w] } else { Vec::new() },
            None => (0..n).filter(|&w| s1[v] == s2[w]).collect(),
        })
        .collect();
    let mut search = IsoSearch {
        g1,
        g2,
        between1: between(g1),
        between2: between(g2),
        candidates,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if search.extend(0) {
        let edge_map = search.edge_map();
        Ok(Some(GraphIso { vertex_map: search.map, edge_map }))
    } else {
        Ok(None)
    }
}

/// Label-respecting isomorphism between two labeled graphs, if any.
pub fn iso_check(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<Option<GraphIso>> {
    iso_check_with(g1, g2, &[])
}

/// Isomorphism of unlabeled graphs.
pub fn iso_check_graphs(g1: &Graph, g2: &Graph) -> Result<Option<GraphIso>> {
    let one = Arc::new(LabelAlgebra::builtin(crate::Builtin::TrivialOne));
    iso_check(
        &LabeledGraph::unit_labeled(g1.clone(), one.clone()),
        &LabeledGraph::unit_labeled(g2.clone(), one),
    )
}

/// Isomorphism of open graphs: an isomorphism of inner graphs commuting
/// with both legs, where foot points are matched by name.
pub fn open_iso_check(x: &OpenGraph, y: &OpenGraph) -> Result<Option<GraphIso>> {
    let same = |a: &[String], b: &[String]| a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>();
    if !same(&x.left_foot, &y.left_foot) || !same(&x.right_foot, &y.right_foot) {
        return Ok(None);
    }
    let mut fixed = Vec::new();
    let (yl, yr) = (foot_position(&y.left_foot), foot_position(&y.right_foot));
    for (i, a) in x.left_foot.iter().enumerate() {
        fixed.push((x.leg_in[i], y.leg_in[yl[a.as_str()]]));
    }
    for (i, b) in x.right_foot.iter().enumerate() {
        fixed.push((x.leg_out[i], y.leg_out[yr[b.as_str()]]));
    }
    iso_check_with(&x.inner, &y.inner, &fixed)
}

/// The inner part of a map of open graphs, which fixes its kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InnerMap {
    /// A label-preserving graph morphism.
    Set(GraphMorphism),
    /// An additive graph morphism; the labels on the target are the fiber
    /// sums of the labels on the source.
    Additive(GraphMorphism),
    Kleisli(KleisliMorphism),
}

impl InnerMap {
    fn vertex_map(&self) -> &[usize] {
        match self {
            InnerMap::Set(m) | InnerMap::Additive(m) => &m.f0,
            InnerMap::Kleisli(k) => &k.vertex_map,
        }
    }
}

/// A map of open graphs: maps of both feet and of the inner graphs.
/// Foot maps are given by index into the feet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenGraphMap {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub inner: InnerMap,
}

/// The first reason a candidate map of open graphs fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoCellFailure {
    /// The square at this point of the left foot does not commute.
    LeftFoot(usize),
    RightFoot(usize),
    Square(SquareFailure),
    /// Label condition of a set-mode map fails at this source edge.
    Label(usize),
    /// Fiber sum differs from the label at this target edge.
    Additive(usize),
    Kleisli(KleisliFailure),
}

impl OpenGraphMap {
    pub fn identity(x: &OpenGraph, kind: MapKind) -> Self {
        let g = x.inner.graph();
        OpenGraphMap {
            left: (0..x.left_foot.len()).collect(),
            right: (0..x.right_foot.len()).collect(),
            inner: match kind {
                MapKind::Set => InnerMap::Set(GraphMorphism::identity(g)),
                MapKind::Additive => InnerMap::Additive(GraphMorphism::identity(g)),
                MapKind::Kleisli => InnerMap::Kleisli(KleisliMorphism::identity(g)),
            },
        }
    }

    /// Vertical composite `next ∘ self`. Both maps must be of one kind.
    pub fn then(&self, next: &OpenGraphMap) -> Result<OpenGraphMap> {
        let inner = match (&self.inner, &next.inner) {
            (InnerMap::Set(a), InnerMap::Set(b)) => InnerMap::Set(a.then(b)),
            (InnerMap::Additive(a), InnerMap::Additive(b)) => InnerMap::Additive(a.then(b)),
            (InnerMap::Kleisli(a), InnerMap::Kleisli(b)) => InnerMap::Kleisli(a.then(b)),
            _ => return Err(Error::invalid("composition", "maps of different kinds")),
        };
        Ok(OpenGraphMap {
            left: self.left.iter().map(|&a| next.left[a]).collect(),
            right: self.right.iter().map(|&b| next.right[b]).collect(),
            inner,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Set,
    Additive,
    Kleisli,
}

/// Whether `m` is a map of open graphs from `x` to `y` of its kind.
pub fn check_2morphism(m: &OpenGraphMap, x: &OpenGraph, y: &OpenGraph) -> Result<Verdict<TwoCellFailure>> {
    let (gx, gy) = (x.inner.graph(), y.inner.graph());
    if m.left.len() != x.left_foot.len() || m.right.len() != x.right_foot.len() {
        return Err(Error::malformed("open graph map", "foot maps must cover every foot point"));
    }
    if m.left.iter().any(|&a| a >= y.left_foot.len()) || m.right.iter().any(|&b| b >= y.right_foot.len()) {
        return Err(Error::malformed("open graph map", "foot map out of range"));
    }
    match &m.inner {
        InnerMap::Set(g) | InnerMap::Additive(g) => g.check_shape(gx, gy)?,
        InnerMap::Kleisli(k) => k.check_shape(gx, gy)?,
    }
    let vm = m.inner.vertex_map();
    for (a, &fa) in m.left.iter().enumerate() {
        if vm[x.leg_in[a]] != y.leg_in[fa] {
            return Ok(Verdict::Fails(TwoCellFailure::LeftFoot(a)));
        }
    }
    for (b, &fb) in m.right.iter().enumerate() {
        if vm[x.leg_out[b]] != y.leg_out[fb] {
            return Ok(Verdict::Fails(TwoCellFailure::RightFoot(b)));
        }
    }
    Ok(match &m.inner {
        InnerMap::Set(g) => {
            if let Some(&f) = g.validate(gx, gy)?.first() {
                return Ok(Verdict::Fails(TwoCellFailure::Square(f)));
            }
            is_label_preserving(g, &x.inner, &y.inner)?.map(TwoCellFailure::Label)
        }
        InnerMap::Additive(g) => {
            if let Some(&f) = g.validate(gx, gy)?.first() {
                return Ok(Verdict::Fails(TwoCellFailure::Square(f)));
            }
            crate::additive::is_additive_morphism(g, &x.inner, &y.inner)?.map(TwoCellFailure::Additive)
        }
        InnerMap::Kleisli(k) => is_kleisli_morphism(k, &x.inner, &y.inner)?.map(TwoCellFailure::Kleisli),
    })
}

/// Horizontal composite of `m1: x → x2` and `m2: y → y2`, a map from
/// `x∘y` to `x2∘y2`. The two maps must agree on the shared foot.
///
/// Kleisli maps are not supported: their horizontal composite is not
/// worked out here.
pub fn horizontal_compose(
    m1: &OpenGraphMap,
    (x, x2): (&OpenGraph, &OpenGraph),
    m2: &OpenGraphMap,
    (y, y2): (&OpenGraph, &OpenGraph),
) -> Result<OpenGraphMap> {
    let (g1, g2, additive) = match (&m1.inner, &m2.inner) {
        (InnerMap::Set(a), InnerMap::Set(b)) => (a, b, false),
        (InnerMap::Additive(a), InnerMap::Additive(b)) => (a, b, true),
        (InnerMap::Kleisli(_), _) | (_, InnerMap::Kleisli(_)) => {
            return Err(Error::Unsupported("horizontal composition of Kleisli maps".into()))
        }
        _ => return Err(Error::invalid("composition", "maps of different kinds")),
    };
    let y_pos = foot_position(&y.left_foot);
    for (i, b) in x.right_foot.iter().enumerate() {
        let j = *y_pos.get(b.as_str()).ok_or_else(|| Error::FootMismatch(b.clone()))?;
        if x2.right_foot[m1.right[i]] != y2.left_foot[m2.left[j]] {
            return Err(Error::FootMismatch(format!("maps disagree on shared point {b}")));
        }
    }
    let src = pushout(x, y)?;
    let dst = pushout(x2, y2)?;
    let nv = src.result.inner.graph().vertex_count();
    let mut f0 = vec![usize::MAX; nv];
    for (v, &c) in src.left_vertices.iter().enumerate() {
        f0[c] = dst.left_vertices[g1.f0[v]];
    }
    for (v, &c) in src.right_vertices.iter().enumerate() {
        f0[c] = dst.right_vertices[g2.f0[v]];
    }
    let f1 = g1
        .f1
        .iter()
        .copied()
        .chain(g2.f1.iter().map(|&e| e + dst.right_edge_offset))
        .collect();
    let g = GraphMorphism { f0, f1 };
    Ok(OpenGraphMap {
        left: m1.left.clone(),
        right: m2.right.clone(),
        inner: if additive { InnerMap::Additive(g) } else { InnerMap::Set(g) },
    })
}
