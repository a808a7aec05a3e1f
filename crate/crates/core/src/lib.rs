//! Graphs whose edges carry polarities drawn from a monoid, a commutative
//! monoid or a rig.
//!
//! The crate covers the three morphism notions for labeled graphs
//! (label-preserving, Kleisli and additive), open graphs glued by pushout,
//! homology with coefficients in a commutative monoid, loop polarity, motif
//! search and the classification of feedback loops that appear only after
//! two graphs are glued together.
//!
//! ```
//! use polarity_graphs::{fixtures, homology};
//!
//! let g = fixtures::homework();
//! let loops = homology::simple_loops(g.graph());
//! assert_eq!(loops.loops.len(), 2);
//! ```

pub mod additive;
pub mod algebra;
pub mod cli;
pub mod dot;
pub mod emergence;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod homology;
pub mod io;
pub mod open;
pub mod paths;
mod unionfind;

pub use algebra::{Builtin, Elem, Flags, LabelAlgebra, MonoidHom};
pub use error::{Error, Result};
pub use graph::{Graph, GraphMorphism, LabeledGraph};

/// Outcome of a check that either holds or fails with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(w) => Verdict::Fails(f(w)),
        }
    }
}
