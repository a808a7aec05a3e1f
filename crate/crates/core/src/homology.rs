//! Chains and homology of graphs with coefficients in a commutative
//! monoid.
//!
//! A 1-chain is a cycle when its source boundary equals its target
//! boundary; no subtraction is needed, so this works over ℕ, the boolean
//! rig or any other commutative monoid. Over ℕ the minimal nonzero cycles
//! are exactly the indicator chains of simple loops, which this module
//! enumerates directly and checks against brute-force oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{Builtin, Elem, LabelAlgebra};
use crate::error::{Error, Result};
use crate::graph::{undirected_components, Graph, LabeledGraph};
use crate::paths::{grade, Path};

/// Default cap on the number of simple loops enumerated.
pub const LOOP_CAP: usize = 10_000;

/// Largest search space for the brute-force oracles.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// What a chain's ids refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Carrier {
    Edges,
    Vertices,
}

/// A finitely supported linear combination of edges or vertices. Zero
/// coefficients are never stored, so equal chains compare equal.
///
/// A chain does not carry its coefficient algebra; operations that need
/// one take it as an argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    carrier: Carrier,
    coeffs: BTreeMap<usize, Elem>,
}

fn nat() -> LabelAlgebra {
    LabelAlgebra::builtin(Builtin::NatAdd)
}

impl Chain {
    pub fn zero(carrier: Carrier) -> Self {
        Chain { carrier, coeffs: BTreeMap::new() }
    }

    /// Sums the terms in `alg`, dropping zero coefficients.
    pub fn from_terms(carrier: Carrier, alg: &LabelAlgebra, terms: impl IntoIterator<Item = (usize, Elem)>) -> Self {
        let mut coeffs: BTreeMap<usize, Elem> = BTreeMap::new();
        for (id, x) in terms {
            let entry = coeffs.entry(id).or_insert_with(|| alg.zero());
            *entry = alg.add(entry, &x);
        }
        let zero = alg.zero();
        coeffs.retain(|_, x| *x != zero);
        Chain { carrier, coeffs }
    }

    /// A chain with natural-number coefficients.
    pub fn nat(carrier: Carrier, terms: &[(usize, u64)]) -> Self {
        Self::from_terms(carrier, &nat(), terms.iter().map(|&(id, n)| (id, Elem::Int(BigInt::from(n)))))
    }

    /// The ℕ-chain counting how often each edge occurs.
    pub fn indicator(edges: impl IntoIterator<Item = usize>) -> Self {
        Self::from_terms(Carrier::Edges, &nat(), edges.into_iter().map(|e| (e, Elem::Int(BigInt::one()))))
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn coeff(&self, id: usize) -> Option<&Elem> {
        self.coeffs.get(&id)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Elem)> {
        self.coeffs.iter().map(|(&id, x)| (id, x))
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Chain, alg: &LabelAlgebra) -> Chain {
        assert_eq!(self.carrier, other.carrier, "adding chains on different carriers");
        Self::from_terms(self.carrier, alg, self.terms().chain(other.terms()).map(|(id, x)| (id, x.clone())))
    }

    /// Keeps only the terms whose id passes `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Chain {
        Chain {
            carrier: self.carrier,
            coeffs: self.coeffs.iter().filter(|(id, _)| keep(**id)).map(|(&id, x)| (id, x.clone())).collect(),
        }
    }

    /// Coefficientwise `≤` for ℕ-chains, which is the canonical preorder.
    pub fn nat_le(&self, other: &Chain) -> bool {
        self.coeffs.iter().all(|(id, x)| match (x, other.coeffs.get(id)) {
            (Elem::Int(a), Some(Elem::Int(b))) => a <= b,
            _ => false,
        })
    }

    /// Human-readable form such as `e1 + 2·e3`, or `0`.
    pub fn show(&self, alg: &LabelAlgebra, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let one = alg.parse_elem("1").ok();
        self.coeffs
            .iter()
            .map(|(&id, x)| {
                let name = names.get(id).cloned().unwrap_or_else(|| format!("#{id}"));
                if Some(x) == one.as_ref() {
                    name
                } else {
                    format!("{}·{name}", alg.show(x))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn check(&self, carrier: Carrier, g: &Graph, alg: &LabelAlgebra) -> Result<()> {
        if self.carrier != carrier {
            return Err(Error::invalid("chain", format!("expected a chain on {carrier:?}")));
        }
        let limit = match carrier {
            Carrier::Edges => g.edge_count(),
            Carrier::Vertices => g.vertex_count(),
        };
        for (&id, x) in &self.coeffs {
            if id >= limit {
                return Err(Error::Dangling { kind: if carrier == Carrier::Edges { "edge" } else { "vertex" }, id });
            }
            if !alg.contains(x) {
                return Err(Error::UnknownElement { algebra: alg.name().to_string(), name: format!("{x:?}") });
            }
        }
        Ok(())
    }
}

fn require_commutative(alg: &LabelAlgebra) -> Result<()> {
    if alg.is_additively_commutative() {
        Ok(())
    } else {
        Err(Error::NotCommutative(alg.name().to_string()))
    }
}

/// The source and target boundaries `(Σ c_e·s(e), Σ c_e·t(e))`.
pub fn boundary_pair(c: &Chain, g: &Graph, alg: &LabelAlgebra) -> Result<(Chain, Chain)> {
    require_commutative(alg)?;
    c.check(Carrier::Edges, g, alg)?;
    Ok(boundaries_unchecked(c, g, alg))
}

fn boundaries_unchecked(c: &Chain, g: &Graph, alg: &LabelAlgebra) -> (Chain, Chain) {
    let s = Chain::from_terms(Carrier::Vertices, alg, c.terms().map(|(e, x)| (g.src(e), x.clone())));
    let t = Chain::from_terms(Carrier::Vertices, alg, c.terms().map(|(e, x)| (g.tgt(e), x.clone())));
    (s, t)
}

/// Whether the two boundaries of `c` agree.
pub fn is_cycle(c: &Chain, g: &Graph, alg: &LabelAlgebra) -> Result<bool> {
    let (s, t) = boundary_pair(c, g, alg)?;
    Ok(s == t)
}

/// Degree-zero homology: the free span of the undirected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H0 {
    pub algebra: String,
    pub components: Vec<Vec<usize>>,
}

impl H0 {
    pub fn rank(&self) -> usize {
        self.components.len()
    }
}

impl fmt::Display for H0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H0 = {}[pi0], free on {} component(s)", self.algebra, self.rank())
    }
}

pub fn h0(g: &Graph, alg: &LabelAlgebra) -> Result<H0> {
    require_commutative(alg)?;
    Ok(H0 { algebra: alg.name().to_string(), components: undirected_components(g) })
}

/// A simple loop, stored as the lexicographically smallest rotation of
/// its edge sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleLoop {
    edges: Vec<usize>,
}

impl SimpleLoop {
    /// Canonicalizes a closed edge sequence visiting no vertex twice.
    pub fn new(edges: Vec<usize>, g: &Graph) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::invalid("loop", "no edges"));
        }
        let p = Path { start: edges.first().map(|&e| g.src(e)).filter(|_| edges[0] < g.edge_count()).ok_or(Error::Dangling { kind: "edge", id: edges[0] })?, edges };
        p.check(g)?;
        if p.end(g) != p.start {
            return Err(Error::invalid("loop", "does not end where it starts"));
        }
        let visited = p.vertices(g);
        let distinct: BTreeSet<usize> = visited[..visited.len() - 1].iter().copied().collect();
        if distinct.len() != p.edges.len() {
            return Err(Error::invalid("loop", "visits a vertex twice"));
        }
        Ok(Self::canonical(p.edges))
    }

    fn canonical(edges: Vec<usize>) -> Self {
        let n = edges.len();
        let best = (0..n)
            .min_by(|&a, &b| (0..n).map(|i| edges[(a + i) % n]).cmp((0..n).map(|i| edges[(b + i) % n])))
            .unwrap_or(0);
        let mut edges = edges;
        edges.rotate_left(best);
        SimpleLoop { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The loop as a path starting at the source of its first edge.
    pub fn path(&self, g: &Graph) -> Path {
        Path { start: g.src(self.edges[0]), edges: self.edges.clone() }
    }

    /// Vertices in order, starting and ending at the same vertex.
    pub fn vertices(&self, g: &Graph) -> Vec<usize> {
        self.path(g).vertices(g)
    }

    pub fn indicator(&self) -> Chain {
        Chain::indicator(self.edges.iter().copied())
    }
}

/// Output of [`simple_loops`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopEnumeration {
    pub loops: Vec<SimpleLoop>,
    pub truncated: bool,
}

/// All simple loops with the default cap.
pub fn simple_loops(g: &Graph) -> LoopEnumeration {
    simple_loops_capped(g, LOOP_CAP)
}

/// All simple loops, one per rotation class, sorted by canonical edge
/// sequence. Parallel edges give distinct loops. Stops once `cap` loops
/// have been found.
///
/// Each loop is found once, from its smallest vertex, by a depth-first
/// search restricted to larger vertices that can still get back.
pub fn simple_loops_capped(g: &Graph, cap: usize) -> LoopEnumeration {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut radj = vec![Vec::new(); n];
    for e in 0..g.edge_count() {
        radj[g.tgt(e)].push(e);
    }
    let mut found = Vec::new();
    let mut truncated = false;
    'starts: for s in 0..n {
        // Vertices ≥ s from which s is reachable inside that subgraph.
        let mut back = vec![false; n];
        back[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &radj[v] {
                let u = g.src(e);
                if u >= s && !back[u] {
                    back[u] = true;
                    stack.push(u);
                }
            }
        }
        let mut on_path = vec![false; n];
        on_path[s] = true;
        let mut edges: Vec<usize> = Vec::new();
        // Explicit stack of (vertex, next out-edge index).
        let mut frames: Vec<(usize, usize)> = vec![(s, 0)];
        while let Some(&mut (v, ref mut i)) = frames.last_mut() {
            if *i == adj[v].len() {
                frames.pop();
                on_path[v] = v == s;
                edges.pop();
                continue;
            }
            let e = adj[v][*i];
            *i += 1;
            let w = g.tgt(e);
            if w == s {
                if found.len() == cap {
                    truncated = true;
                    break 'starts;
                }
                let mut cycle = edges.clone();
                cycle.push(e);
                found.push(SimpleLoop::canonical(cycle));
            } else if w > s && back[w] && !on_path[w] {
                on_path[w] = true;
                edges.push(e);
                frames.push((w, 0));
            }
        }
    }
    found.sort();
    LoopEnumeration { loops: found, truncated }
}

fn nat_coeffs(c: &Chain) -> Result<BTreeMap<usize, BigInt>> {
    c.terms()
        .map(|(e, x)| match x {
            Elem::Int(n) if !n.is_negative() => Ok((e, n.clone())),
            _ => Err(Error::invalid("chain", "expected natural-number coefficients")),
        })
        .collect()
}

/// Splits an ℕ-cycle into simple loops with multiplicities.
///
/// Repeatedly walks along edges with positive remaining coefficient,
/// taking the smallest such edge at each vertex, until a vertex repeats;
/// the loop just closed is subtracted as many times as it fits. Loops are
/// returned in canonical order with their total multiplicity.
pub fn decompose_cycle(c: &Chain, g: &Graph) -> Result<Vec<(SimpleLoop, BigInt)>> {
    if !is_cycle(c, g, &nat())? {
        return Err(Error::NotACycle);
    }
    let mut rest = nat_coeffs(c)?;
    let adj = g.adjacency();
    let mut parts: BTreeMap<SimpleLoop, BigInt> = BTreeMap::new();
    while let Some((&first, _)) = rest.iter().next() {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        let mut walk: Vec<usize> = Vec::new();
        let mut v = g.src(first);
        let mut next = Some(first);
        let closed_at = loop {
            if let Some(&pos) = seen.get(&v) {
                break pos;
            }
            seen.insert(v, walk.len());
            let e = next
                .take()
                .or_else(|| adj[v].iter().copied().find(|e| rest.contains_key(e)))
                .expect("a balanced chain leaves every vertex it enters");
            walk.push(e);
            v = g.tgt(e);
        };
        let cycle = walk[closed_at..].to_vec();
        let times = cycle.iter().map(|e| rest[e].clone()).min().expect("nonempty loop");
        for e in &cycle {
            let left = &rest[e] - &times;
            if left.is_zero() {
                rest.remove(e);
            } else {
                rest.insert(*e, left);
            }
        }
        *parts.entry(SimpleLoop::canonical(cycle)).or_insert_with(BigInt::zero) += times;
    }
    Ok(parts.into_iter().collect())
}

/// The value `Σ n_e·ℓ(e)` of the labeling on an ℕ-cycle.
pub fn feedback(c: &Chain, g: &LabeledGraph) -> Result<Elem> {
    let alg = g.algebra();
    require_commutative(alg)?;
    if !is_cycle(c, g.graph(), &nat())? {
        return Err(Error::NotACycle);
    }
    let coeffs = nat_coeffs(c)?;
    Ok(alg.sum(coeffs.iter().map(|(&e, n)| alg.scale(n, g.label(e))).collect::<Vec<_>>().iter()))
}

/// The product of labels around a loop, read from its canonical rotation.
pub fn loop_polarity(l: &SimpleLoop, g: &LabeledGraph) -> Result<Elem> {
    grade(&l.path(g.graph()), g)
}

/// Two ℕ-combinations of generators with the same chain sum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub lhs: Vec<u32>,
    pub rhs: Vec<u32>,
}

impl Relation {
    /// Renders with generator names, e.g. `a + d = b + c`.
    pub fn show(&self, names: &[String]) -> String {
        let side = |v: &[u32]| {
            v.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{k}{}", names[i]) })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{} = {}", side(&self.lhs), side(&self.rhs))
    }
}

/// Relations among loops with coefficients at most `bound`.
///
/// A relation pairs two nonzero coefficient vectors with equal chain sums
/// and no generator in common (a shared generator could be cancelled from
/// both sides). Each unordered pair is listed once, with the
/// lexicographically larger vector on the left.
pub fn find_relations(loops: &[SimpleLoop], bound: u32) -> Result<Vec<Relation>> {
    if bound == 0 {
        return Err(Error::invalid("bound", "must be at least 1"));
    }
    let k = loops.len();
    let space = (bound as u64 + 1).checked_pow(k as u32).filter(|&s| s <= BRUTE_FORCE_LIMIT);
    if space.is_none() {
        return Err(Error::GuardExceeded { what: "relation search space", limit: BRUTE_FORCE_LIMIT });
    }
    let mut by_sum: BTreeMap<Vec<(usize, u64)>, Vec<Vec<u32>>> = BTreeMap::new();
    let mut coeffs = vec![0u32; k];
    loop {
        let mut sum: BTreeMap<usize, u64> = BTreeMap::new();
        for (l, &c) in loops.iter().zip(&coeffs) {
            for &e in l.edges() {
                *sum.entry(e).or_default() += c as u64;
            }
        }
        sum.retain(|_, n| *n > 0);
        if coeffs.iter().any(|&c| c > 0) {
            by_sum.entry(sum.into_iter().collect()).or_default().push(coeffs.clone());
        }
        let mut i = 0;
        while i < k && coeffs[i] == bound {
            coeffs[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        coeffs[i] += 1;
    }
    let mut out = BTreeSet::new();
    for combos in by_sum.values() {
        for (i, a) in combos.iter().enumerate() {
            for b in &combos[i + 1..] {
                if a.iter().zip(b).all(|(&x, &y)| x == 0 || y == 0) {
                    let (lhs, rhs) = if a > b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                    out.insert(Relation { lhs, rhs });
                }
            }
        }
    }
    let mut out: Vec<Relation> = out.into_iter().collect();
    out.sort_by(|x, y| y.cmp(x));
    Ok(out)
}

/// The loop structure of a labeled graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub loops: Vec<SimpleLoop>,
    /// `Σ ℓ(e)` around each loop, when the labels add commutatively.
    pub feedbacks: Vec<Option<Elem>>,
    /// Product of labels around each loop.
    pub polarities: Vec<Elem>,
    /// Relations at the requested bound, or `None` when the search space
    /// is too large.
    pub relations: Option<Vec<Relation>>,
    pub truncated: bool,
}

pub fn cycle_report(g: &LabeledGraph, bound: u32) -> Result<CycleReport> {
    let LoopEnumeration { loops, truncated } = simple_loops(g.graph());
    let commutative = g.algebra().is_additively_commutative();
    let mut feedbacks = Vec::with_capacity(loops.len());
    let mut polarities = Vec::with_capacity(loops.len());
    for l in &loops {
        feedbacks.push(if commutative { Some(feedback(&l.indicator(), g)?) } else { None });
        polarities.push(loop_polarity(l, g)?);
    }
    let relations = match find_relations(&loops, bound) {
        Ok(r) => Some(r),
        Err(Error::GuardExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CycleReport { loops, feedbacks, polarities, relations, truncated })
}

fn search_space(base: u64, edges: usize) -> Result<u64> {
    base.checked_pow(edges as u32)
        .filter(|&s| s <= BRUTE_FORCE_LIMIT)
        .ok_or(Error::GuardExceeded { what: "brute-force search space", limit: BRUTE_FORCE_LIMIT })
}

fn odometer(digits: usize, base: usize, mut visit: impl FnMut(&[usize])) {
    let mut xs = vec![0usize; digits];
    loop {
        visit(&xs);
        let mut i = 0;
        while i < digits && xs[i] + 1 == base {
            xs[i] = 0;
            i += 1;
        }
        if i == digits {
            return;
        }
        xs[i] += 1;
    }
}

/// Every cycle with coefficients in a finite commutative monoid, by
/// enumerating all edge chains. Sorted.
pub fn brute_force_h1(g: &Graph, alg: &LabelAlgebra) -> Result<Vec<Chain>> {
    require_commutative(alg)?;
    let elements = alg
        .elements()
        .ok_or_else(|| Error::Unsupported(format!("brute force over infinite algebra {}", alg.name())))?;
    search_space(elements.len() as u64, g.edge_count())?;
    let mut out = Vec::new();
    odometer(g.edge_count(), elements.len(), |xs| {
        let c = Chain::from_terms(Carrier::Edges, alg, xs.iter().enumerate().map(|(e, &i)| (e, elements[i].clone())));
        let (s, t) = boundaries_unchecked(&c, g, alg);
        if s == t {
            out.push(c);
        }
    });
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every ℕ-cycle with all coefficients at most `bound`. Sorted.
pub fn brute_force_circulations(g: &Graph, bound: u32) -> Result<Vec<Chain>> {
    search_space(bound as u64 + 1, g.edge_count())?;
    let alg = nat();
    let mut out = Vec::new();
    odometer(g.edge_count(), bound as usize + 1, |xs| {
        let c = Chain::nat(Carrier::Edges, &xs.iter().enumerate().map(|(e, &n)| (e, n as u64)).collect::<Vec<_>>());
        let (s, t) = boundaries_unchecked(&c, g, &alg);
        if s == t {
            out.push(c);
        }
    });
    out.sort();
    Ok(out)
}

/// The nonzero ℕ-chains in `chains` with no other nonzero member below
/// them in the canonical preorder.
pub fn minimal_elements(chains: &[Chain]) -> Vec<Chain> {
    let nonzero: Vec<&Chain> = chains.iter().filter(|c| !c.is_zero()).collect();
    nonzero
        .iter()
        .filter(|c| !nonzero.iter().any(|d| d != *c && d.nat_le(c)))
        .map(|c| (*c).clone())
        .collect()
}

/// Natural-number coefficient of an ℕ-chain term as `u64`, for display
/// and tests.
pub fn nat_coeff(c: &Chain, id: usize) -> u64 {
    match c.coeff(id) {
        Some(Elem::Int(n)) => n.to_u64().unwrap_or(u64::MAX),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn loop_names(g: &Graph, l: &SimpleLoop) -> String {
        l.edges().iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join("")
    }

    #[test]
    fn minimal_cycle_counts() {
        assert_eq!(simple_loops(&fixtures::g2()).loops.len(), 1);
        assert_eq!(simple_loops(&fixtures::p2()).loops.len(), 0);
        let q4 = fixtures::q4();
        let names: Vec<String> = simple_loops(&q4).loops.iter().map(|l| loop_names(&q4, l)).collect();
        assert_eq!(names, ["e1e3", "e1e4", "e2e3", "e2e4"]);
        assert_eq!(simple_loops(&fixtures::r5()).loops.len(), 6);
    }

    #[test]
    fn boundaries() {
        let n = nat();
        let q4 = fixtures::q4();
        let a = Chain::indicator([0, 2]);
        let (s, t) = boundary_pair(&a, &q4, &n).unwrap();
        assert_eq!(s, t);
        assert_eq!(s, Chain::nat(Carrier::Vertices, &[(0, 1), (1, 1)]));
        let p2 = fixtures::p2();
        let (s, t) = boundary_pair(&Chain::indicator([0, 1]), &p2, &n).unwrap();
        assert_eq!(s, Chain::nat(Carrier::Vertices, &[(0, 2)]));
        assert_eq!(t, Chain::nat(Carrier::Vertices, &[(1, 2)]));
        let z = Chain::zero(Carrier::Edges);
        assert_eq!(boundary_pair(&z, &p2, &n).unwrap(), (Chain::zero(Carrier::Vertices), Chain::zero(Carrier::Vertices)));
        assert!(!is_cycle(&Chain::indicator([0]), &fixtures::g2(), &n).unwrap());
    }

    #[test]
    fn h0_is_free_on_components() {
        let n = nat();
        assert_eq!(h0(&fixtures::g2(), &n).unwrap().rank(), 1);
        assert_eq!(h0(&Graph::with_vertices(4), &n).unwrap().rank(), 4);
    }

    #[test]
    fn decomposition() {
        let q4 = fixtures::q4();
        let full = Chain::indicator([0, 1, 2, 3]);
        let parts = decompose_cycle(&full, &q4).unwrap();
        assert_eq!(parts.len(), 2);
        let resum = parts.iter().fold(Chain::zero(Carrier::Edges), |acc, (l, k)| {
            let scaled = Chain::from_terms(Carrier::Edges, &nat(), l.edges().iter().map(|&e| (e, Elem::Int(k.clone()))));
            acc.add(&scaled, &nat())
        });
        assert_eq!(resum, full);
        let g2 = fixtures::g2();
        let double = Chain::nat(Carrier::Edges, &[(0, 2), (1, 2)]);
        let parts = decompose_cycle(&double, &g2).unwrap();
        assert_eq!(parts, vec![(SimpleLoop { edges: vec![0, 1] }, BigInt::from(2))]);
        assert!(decompose_cycle(&Chain::zero(Carrier::Edges), &g2).unwrap().is_empty());
        assert_eq!(decompose_cycle(&Chain::indicator([0]), &g2), Err(Error::NotACycle));
    }

    #[test]
    fn relations() {
        let g2 = fixtures::g2();
        assert!(find_relations(&simple_loops(&g2).loops, 1).unwrap().is_empty());
        let q4 = simple_loops(&fixtures::q4()).loops;
        let rel = find_relations(&q4, 1).unwrap();
        assert_eq!(rel, vec![Relation { lhs: vec![1, 0, 0, 1], rhs: vec![0, 1, 1, 0] }]);
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(rel[0].show(&names), "a + d = b + c");
        assert_eq!(find_relations(&simple_loops(&fixtures::r5()).loops, 1).unwrap().len(), 3);
    }

    #[test]
    fn oracles() {
        let g2 = fixtures::g2();
        let b = LabelAlgebra::boolean_rig();
        assert_eq!(brute_force_h1(&g2, &b).unwrap(), vec![Chain::zero(Carrier::Edges), Chain::from_terms(Carrier::Edges, &b, [(0, Elem::Idx(1)), (1, Elem::Idx(1))])]);
        let z2 = LabelAlgebra::cyclic(2).unwrap();
        assert_eq!(brute_force_h1(&fixtures::p2(), &z2).unwrap().len(), 2);
        assert_eq!(brute_force_h1(&Graph::with_vertices(3), &z2).unwrap(), vec![Chain::zero(Carrier::Edges)]);
        assert_eq!(brute_force_circulations(&g2, 1).unwrap().len(), 2);
        let q4 = brute_force_circulations(&fixtures::q4(), 1).unwrap();
        assert_eq!(q4.len(), 6);
        assert!(q4.contains(&Chain::indicator([0, 1, 2, 3])));
        assert_eq!(minimal_elements(&q4).len(), 4);
    }

    #[test]
    fn homework_polarities() {
        let hw = fixtures::homework();
        let report = cycle_report(&hw, 1).unwrap();
        let signs: Vec<String> = report.polarities.iter().map(|p| hw.algebra().show(p)).collect();
        assert_eq!(report.loops.len(), 2);
        let mut sorted = signs.clone();
        sorted.sort();
        assert_eq!(sorted, ["+", "-"]);
        // Over a non-rig table, feedback adds with the monoid operation,
        // which for signs is the product again.
        for (f, p) in report.feedbacks.iter().zip(&report.polarities) {
            assert_eq!(f.as_ref(), Some(p));
        }
    }

    #[test]
    fn loop_validation() {
        let g2 = fixtures::g2();
        assert_eq!(SimpleLoop::new(vec![1, 0], &g2).unwrap().edges(), &[0, 1]);
        assert!(SimpleLoop::new(vec![0], &g2).is_err());
    }
}
