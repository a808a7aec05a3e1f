//! Emergent feedback: which cycles of a glued graph already existed in
//! one of the two pieces, and which only appear after gluing.
//!
//! A cycle `c` of `X ∪ Y` splits uniquely as `p_X c + p_Y c`. It is
//! inherited exactly when both parts are cycles on their own; the other
//! checks here are the one-sided and restricted forms of that test, which
//! agree with it over cancellative coefficients.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Elem, LabelAlgebra};
use crate::error::{Error, Result};
use crate::graph::{Graph, LabeledGraph};
use crate::homology::{
    boundary_pair, brute_force_circulations, brute_force_h1, is_cycle, loop_polarity, simple_loops, Carrier, Chain,
    SimpleLoop, BRUTE_FORCE_LIMIT,
};
use crate::open::{pushout, OpenGraph};
use crate::paths::Path;

/// Which piece an edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn letter(self) -> char {
        match self {
            Side::X => 'x',
            Side::Y => 'y',
        }
    }
}

/// The composite of two open graphs glued along monic legs, remembering
/// which side each edge came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedGraph {
    pub composite: LabeledGraph,
    /// Side of each composite edge.
    pub side: Vec<Side>,
    /// Composite vertices lying in both pieces, sorted.
    pub shared: Vec<usize>,
    /// Composite vertex of each vertex of `X`.
    pub x_vertices: Vec<usize>,
    /// Composite vertex of each vertex of `Y`.
    pub y_vertices: Vec<usize>,
    pieces: [Graph; 2],
}

fn injective(leg: &[usize]) -> bool {
    leg.iter().collect::<BTreeSet<_>>().len() == leg.len()
}

/// Glues `x` and `y` along `x`'s right foot and `y`'s left foot. Both of
/// those legs must be injective.
pub fn glue(x: &OpenGraph, y: &OpenGraph) -> Result<GluedGraph> {
    if !injective(x.leg_out()) {
        return Err(Error::NotMonic("right leg of the left piece"));
    }
    if !injective(y.leg_in()) {
        return Err(Error::NotMonic("left leg of the right piece"));
    }
    let po = pushout(x, y)?;
    let ex = x.inner().graph().edge_count();
    let ey = y.inner().graph().edge_count();
    let shared: BTreeSet<usize> = x.leg_out().iter().map(|&v| po.left_vertices[v]).collect();
    Ok(GluedGraph {
        composite: po.result.inner().clone(),
        side: std::iter::repeat_n(Side::X, ex).chain(std::iter::repeat_n(Side::Y, ey)).collect(),
        shared: shared.into_iter().collect(),
        x_vertices: po.left_vertices,
        y_vertices: po.right_vertices,
        pieces: [x.inner().graph().clone(), y.inner().graph().clone()],
    })
}

impl GluedGraph {
    pub fn graph(&self) -> &Graph {
        self.composite.graph()
    }

    /// The piece on the given side, as it was before gluing.
    pub fn piece(&self, side: Side) -> &Graph {
        &self.pieces[side as usize]
    }

    /// The composite's vertices with only the given side's edges, keeping
    /// composite edge ids through `edge_ids`.
    fn side_graph(&self, side: Side) -> (Graph, Vec<usize>) {
        let g = self.graph();
        let mut out = Graph::new(g.vertex_names().to_vec(), &[]).expect("no edges");
        let mut ids = Vec::new();
        for e in (0..g.edge_count()).filter(|&e| self.side[e] == side) {
            out.add_named_edge(g.edge_name(e), g.src(e), g.tgt(e)).expect("vertices exist");
            ids.push(e);
        }
        (out, ids)
    }
}

/// A word in `x` and `y` recording which side each step of a path takes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GradeWord {
    letters: Vec<Side>,
}

impl GradeWord {
    pub fn new(letters: Vec<Side>) -> Self {
        GradeWord { letters }
    }

    pub fn letters(&self) -> &[Side] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Merges equal adjacent letters, using `x² = x` and `y² = y`.
    pub fn collapse(&self) -> GradeWord {
        let mut letters = self.letters.clone();
        letters.dedup();
        GradeWord { letters }
    }

    pub fn is_alternating(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1])
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

/// Runs are written with superscript exponents, e.g. `x³y²x`; the empty
/// word is `1`.
impl fmt::Display for GradeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < self.letters.len() {
            let run = self.letters[i..].iter().take_while(|&&s| s == self.letters[i]).count();
            write!(f, "{}", self.letters[i].letter())?;
            if run > 1 {
                f.write_str(&superscript(run))?;
            }
            i += run;
        }
        Ok(())
    }
}

/// The raw grade of a path: its sides, read in the direction of travel.
pub fn grade_word(p: &Path, g: &GluedGraph) -> Result<GradeWord> {
    p.check(g.graph())?;
    Ok(GradeWord::new(p.edges.iter().map(|&e| g.side[e]).collect()))
}

/// `p_X c` or `p_Y c`: the part of an edge chain lying on one side.
pub fn side_projection(c: &Chain, g: &GluedGraph, side: Side) -> Chain {
    c.restrict(|e| g.side.get(e) == Some(&side))
}

fn side_balanced(c: &Chain, g: &GluedGraph, side: Side, alg: &LabelAlgebra) -> Result<bool> {
    let (s, t) = boundary_pair(&side_projection(c, g, side), g.graph(), alg)?;
    Ok(s == t)
}

/// Whether a cycle of the composite is the sum of a cycle of `X` and a
/// cycle of `Y`.
pub fn is_inherited_cycle(c: &Chain, g: &GluedGraph, alg: &LabelAlgebra) -> Result<bool> {
    if !is_cycle(c, g.graph(), alg)? {
        return Err(Error::NotACycle);
    }
    Ok(side_balanced(c, g, Side::X, alg)? && side_balanced(c, g, Side::Y, alg)?)
}

/// Which equalizer condition [`mv_check`] tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MvMode {
    /// `s p_X c = t p_X c` and `s p_Y c = t p_Y c`.
    TwoSided,
    /// Only the condition for one side.
    OneSided(Side),
    /// One side's condition seen only at shared vertices.
    QForm(Side),
}

impl fmt::Display for MvMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MvMode::TwoSided => f.write_str("two-sided"),
            MvMode::OneSided(s) => write!(f, "one-sided p_{}", s.letter().to_ascii_uppercase()),
            MvMode::QForm(s) => write!(f, "q-form p_{}", s.letter().to_ascii_uppercase()),
        }
    }
}

/// Where the cycles checked by [`mv_check`] come from.
#[derive(Debug, Clone)]
pub enum Coefficients {
    /// Every chain with coefficients in a finite commutative monoid.
    Finite(Arc<LabelAlgebra>),
    /// Every ℕ-chain with coefficients at most the bound.
    NatBounded(u32),
}

impl Coefficients {
    fn algebra(&self) -> Arc<LabelAlgebra> {
        match self {
            Coefficients::Finite(a) => a.clone(),
            Coefficients::NatBounded(_) => Arc::new(LabelAlgebra::builtin(crate::algebra::Builtin::NatAdd)),
        }
    }

    fn cycles(&self, g: &Graph) -> Result<Vec<Chain>> {
        match self {
            Coefficients::Finite(a) => brute_force_h1(g, a),
            Coefficients::NatBounded(b) => brute_force_circulations(g, *b),
        }
    }
}

/// Outcome of comparing an equalizer condition with membership in the
/// image of `H_1(X) ⊕ H_1(Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub mode: MvMode,
    pub algebra: String,
    pub cancellative: bool,
    pub cycles: usize,
    pub inherited: usize,
    /// Cycles on which the condition and image membership disagree.
    pub mismatches: Vec<Chain>,
}

impl VerificationReport {
    /// Whether the outcome is the expected one: the
    /// two-sided test always matches, the others whenever the
    /// coefficients are cancellative.
    pub fn as_predicted(&self) -> bool {
        match self.mode {
            MvMode::TwoSided => self.mismatches.is_empty(),
            _ => !self.cancellative || self.mismatches.is_empty(),
        }
    }

    pub fn emergent(&self) -> usize {
        self.cycles - self.inherited
    }
}

/// `c ↦ c` restricted to shared vertices.
fn q(c: &Chain, g: &GluedGraph) -> Chain {
    c.restrict(|v| g.shared.binary_search(&v).is_ok())
}

/// Whether `c` satisfies the equalizer condition of `mode`.
pub fn satisfies(c: &Chain, g: &GluedGraph, mode: MvMode, alg: &LabelAlgebra) -> Result<bool> {
    Ok(match mode {
        MvMode::TwoSided => side_balanced(c, g, Side::X, alg)? && side_balanced(c, g, Side::Y, alg)?,
        MvMode::OneSided(side) => side_balanced(c, g, side, alg)?,
        MvMode::QForm(side) => {
            let (s, t) = boundary_pair(&side_projection(c, g, side), g.graph(), alg)?;
            q(&s, g) == q(&t, g)
        }
    })
}

/// The image of `H_1(X) ⊕ H_1(Y)` in the composite's chains, built by
/// enumerating each side's cycles and adding every pair.
fn iota_image(g: &GluedGraph, coeffs: &Coefficients, alg: &LabelAlgebra) -> Result<HashSet<Chain>> {
    let side_cycles = |side: Side| -> Result<Vec<Chain>> {
        let (sg, ids) = g.side_graph(side);
        Ok(coeffs
            .cycles(&sg)?
            .into_iter()
            .map(|c| Chain::from_terms(Carrier::Edges, alg, c.terms().map(|(e, x)| (ids[e], x.clone()))))
            .collect())
    };
    let (hx, hy) = (side_cycles(Side::X)?, side_cycles(Side::Y)?);
    if (hx.len() as u64).saturating_mul(hy.len() as u64) > BRUTE_FORCE_LIMIT {
        return Err(Error::GuardExceeded { what: "image of H1(X) + H1(Y)", limit: BRUTE_FORCE_LIMIT });
    }
    Ok(hx.iter().flat_map(|a| hy.iter().map(move |b| a.add(b, alg))).collect())
}

/// Checks one equalizer condition against image membership on every
/// enumerated cycle of the composite.
pub fn mv_check(g: &GluedGraph, coeffs: &Coefficients, mode: MvMode) -> Result<VerificationReport> {
    let alg = coeffs.algebra();
    let cancellative = match coeffs {
        Coefficients::NatBounded(_) => true,
        Coefficients::Finite(a) => a.is_cancellative()?.holds(),
    };
    let image = iota_image(g, coeffs, &alg)?;
    let cycles = coeffs.cycles(g.graph())?;
    let mut inherited = 0;
    let mut mismatches = Vec::new();
    for c in &cycles {
        let member = image.contains(c);
        inherited += member as usize;
        if satisfies(c, g, mode, &alg)? != member {
            mismatches.push(c.clone());
        }
    }
    Ok(VerificationReport {
        mode,
        algebra: alg.name().to_string(),
        cancellative,
        cycles: cycles.len(),
        inherited,
        mismatches,
    })
}

/// One simple loop of the composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopEntry {
    pub simple_loop: SimpleLoop,
    pub inherited: bool,
    /// Collapsed grade word of the canonical rotation. Another rotation
    /// can start with the other letter, but never changes whether the
    /// word is a single letter.
    pub word: GradeWord,
    pub polarity: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmergenceReport {
    pub x_loops: usize,
    pub y_loops: usize,
    pub loops: Vec<LoopEntry>,
    pub truncated: bool,
}

impl EmergenceReport {
    pub fn emergent(&self) -> usize {
        self.loops.iter().filter(|l| !l.inherited).count()
    }
}

/// Every simple loop of the composite, tagged inherited or emergent.
pub fn emergence_report(g: &GluedGraph) -> Result<EmergenceReport> {
    let nat = LabelAlgebra::builtin(crate::algebra::Builtin::NatAdd);
    let all = simple_loops(g.graph());
    let mut loops = Vec::with_capacity(all.loops.len());
    for l in all.loops {
        let inherited = is_inherited_cycle(&l.indicator(), g, &nat)?;
        let word = grade_word(&l.path(g.graph()), g)?.collapse();
        let polarity = loop_polarity(&l, &g.composite)?;
        loops.push(LoopEntry { simple_loop: l, inherited, word, polarity });
    }
    Ok(EmergenceReport {
        x_loops: simple_loops(g.piece(Side::X)).loops.len(),
        y_loops: simple_loops(g.piece(Side::Y)).loops.len(),
        loops,
        truncated: all.truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Builtin;
    use crate::fixtures;

    fn path_by_names(g: &Graph, start: &str, edges: &[(&str, &str)]) -> Path {
        let ids = edges
            .iter()
            .map(|(s, t)| {
                let (s, t) = (g.vertex_by_name(s).unwrap(), g.vertex_by_name(t).unwrap());
                (0..g.edge_count()).find(|&e| g.src(e) == s && g.tgt(e) == t).unwrap()
            })
            .collect();
        Path { start: g.vertex_by_name(start).unwrap(), edges: ids }
    }

    #[test]
    fn bold_path_grade() {
        let g = glue(&fixtures::acyclic_red(), &fixtures::acyclic_blue()).unwrap();
        let p = path_by_names(
            g.graph(),
            "a",
            &[("a", "b"), ("b", "d"), ("d", "e"), ("e", "f"), ("f", "g"), ("g", "c")],
        );
        let raw = grade_word(&p, &g).unwrap();
        assert_eq!(raw.to_string(), "x³y²x");
        assert_eq!(raw.collapse().to_string(), "xyx");
        assert!(raw.collapse().is_alternating());
        assert_eq!(GradeWord::default().to_string(), "1");
    }

    #[test]
    fn acyclic_pieces_make_emergent_loops() {
        let g = glue(&fixtures::acyclic_red(), &fixtures::acyclic_blue()).unwrap();
        assert_eq!(g.graph().vertex_count(), 9);
        assert_eq!(g.shared.len(), 4);
        let report = emergence_report(&g).unwrap();
        assert_eq!((report.x_loops, report.y_loops), (0, 0));
        assert!(!report.loops.is_empty());
        assert!(report.loops.iter().all(|l| !l.inherited && l.word.len() >= 2));
    }

    #[test]
    fn boolean_counterexample() {
        let (red, blue) = fixtures::boolean_counterexample();
        let g = glue(&red, &blue).unwrap();
        let b = red.algebra().clone();
        let c = Chain::from_terms(Carrier::Edges, &b, (0..3).map(|e| (e, Elem::Idx(1))));
        assert!(is_cycle(&c, g.graph(), &b).unwrap());
        assert!(!is_inherited_cycle(&c, &g, &b).unwrap());
        assert!(side_balanced(&c, &g, Side::X, &b).unwrap());
        assert!(!side_balanced(&c, &g, Side::Y, &b).unwrap());
        let coeffs = Coefficients::Finite(b);
        let one = mv_check(&g, &coeffs, MvMode::OneSided(Side::X)).unwrap();
        assert!(!one.cancellative);
        assert!(one.mismatches.contains(&c));
        assert!(one.as_predicted());
        assert!(mv_check(&g, &coeffs, MvMode::TwoSided).unwrap().mismatches.is_empty());
    }

    #[test]
    fn cancellative_modes_agree() {
        let g = glue(&fixtures::acyclic_red(), &fixtures::acyclic_blue()).unwrap();
        let coeffs = Coefficients::NatBounded(1);
        for mode in [MvMode::TwoSided, MvMode::OneSided(Side::X), MvMode::QForm(Side::Y)] {
            let r = mv_check(&g, &coeffs, mode).unwrap();
            assert!(r.mismatches.is_empty(), "{mode}");
            assert!(r.emergent() > 0);
        }
    }

    #[test]
    fn inherited_when_one_side_is_bare() {
        let t = Arc::new(LabelAlgebra::builtin(Builtin::TrivialOne));
        let loop_side = LabeledGraph::unit_labeled(fixtures::g2(), t.clone());
        let bare = LabeledGraph::unit_labeled(Graph::from_names(&["u", "v"], &[]).unwrap(), t);
        let x = OpenGraph::from_vertex_names(loop_side, &[], &["u", "v"]).unwrap();
        let y = OpenGraph::from_vertex_names(bare, &["u", "v"], &[]).unwrap();
        let report = emergence_report(&glue(&x, &y).unwrap()).unwrap();
        assert_eq!(report.loops.len(), 1);
        assert!(report.loops[0].inherited);
        assert_eq!(report.loops[0].word.to_string(), "x");
    }

    #[test]
    fn rejects_non_monic_legs() {
        let x = fixtures::fan_out();
        let y = fixtures::fan_in();
        assert!(matches!(glue(&x, &y), Err(Error::NotMonic(_))));
    }

    #[test]
    fn projections_reassemble() {
        let g = glue(&fixtures::acyclic_red(), &fixtures::acyclic_blue()).unwrap();
        let n = LabelAlgebra::builtin(Builtin::NatAdd);
        let c = Chain::indicator(0..g.graph().edge_count());
        let parts = side_projection(&c, &g, Side::X).add(&side_projection(&c, &g, Side::Y), &n);
        assert_eq!(parts, c);
    }
}
