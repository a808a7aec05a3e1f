//! Additive morphisms: graph morphisms along which each target edge's
//! label is the sum of the labels in its fiber.

use crate::error::{Error, Result};
use crate::graph::{same_algebra, GraphMorphism, LabeledGraph, SquareFailure};
use crate::{Graph, Verdict};

fn require_commutative(g: &LabeledGraph) -> Result<()> {
    if g.algebra().is_additively_commutative() {
        Ok(())
    } else {
        Err(Error::NotCommutative(g.algebra().name().to_string()))
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

/// Whether every target edge is labeled by the sum of its fiber, an empty
/// fiber summing to zero. On failure, the first target edge that is not.
pub fn is_additive_morphism(m: &GraphMorphism, src: &LabeledGraph, dst: &LabeledGraph) -> Result<Verdict<usize>> {
    same_algebra(src.algebra(), dst.algebra())?;
    require_commutative(src)?;
    require_valid(m, src.graph(), dst.graph())?;
    let pushed = fiber_sums(m, src, dst.graph().edge_count());
    Ok(match (0..pushed.len()).find(|&e| pushed[e] != *dst.label(e)) {
        None => Verdict::Holds,
        Some(e) => Verdict::Fails(e),
    })
}

fn fiber_sums(m: &GraphMorphism, src: &LabeledGraph, targets: usize) -> Vec<crate::Elem> {
    let alg = src.algebra();
    let mut sums = vec![alg.zero(); targets];
    for (e, &image) in m.f1.iter().enumerate() {
        sums[image] = alg.add(&sums[image], src.label(e));
    }
    sums
}

/// The unique labeling of `dst` making `m` additive.
pub fn pushforward_labeling(m: &GraphMorphism, src: &LabeledGraph, dst: &Graph) -> Result<LabeledGraph> {
    require_commutative(src)?;
    require_valid(m, src.graph(), dst)?;
    let labels = fiber_sums(m, src, dst.edge_count());
    LabeledGraph::new(dst.clone(), src.algebra().clone(), labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Builtin, LabelAlgebra};
    use std::sync::Arc;

    #[test]
    fn coffee_shop() {
        let q = Arc::new(LabelAlgebra::builtin(Builtin::RatAdd));
        let two = Graph::from_names(&["hours open", "sales"], &[("hours open", "sales"), ("hours open", "sales")]).unwrap();
        let one = Graph::from_names(&["hours open", "sales"], &[("hours open", "sales")]).unwrap();
        let src = LabeledGraph::from_names(two, q, &["150", "25"]).unwrap();
        let m = GraphMorphism { f0: vec![0, 1], f1: vec![0, 0] };
        let pushed = pushforward_labeling(&m, &src, &one).unwrap();
        assert_eq!(pushed.label_name(0), "175");
        assert!(is_additive_morphism(&m, &src, &pushed).unwrap().holds());
    }

    #[test]
    fn empty_fiber_gets_zero() {
        let n = Arc::new(LabelAlgebra::builtin(Builtin::NatAdd));
        let src = LabeledGraph::from_names(Graph::from_names(&["u", "v"], &[("u", "v")]).unwrap(), n, &["4"]).unwrap();
        let dst = Graph::from_names(&["u", "v"], &[("u", "v"), ("v", "u")]).unwrap();
        let m = GraphMorphism { f0: vec![0, 1], f1: vec![0] };
        let pushed = pushforward_labeling(&m, &src, &dst).unwrap();
        assert_eq!(pushed.label_name(1), "0");
        let wrong = LabeledGraph::from_names(dst, src.algebra().clone(), &["4", "1"]).unwrap();
        assert_eq!(is_additive_morphism(&m, &src, &wrong).unwrap(), Verdict::Fails(1));
    }

    #[test]
    fn rejects_noncommutative() {
        let sa = crate::graph::Semiautomaton {
            states: vec!["0".into(), "1".into()],
            inputs: vec!["swap".into(), "c0".into()],
            action: vec![vec![1, 0], vec![0, 0]],
        };
        let g = crate::graph::from_semiautomaton(&sa).unwrap();
        let id = GraphMorphism::identity(g.graph());
        assert!(matches!(pushforward_labeling(&id, &g, g.graph()), Err(Error::NotCommutative(_))));
    }
}
