//! Exact gain-graph balance testing and its application to piecewise-linear
//! geometry.
//!
//! The crate is organised bottom-up:
//!
//! - [`abelian`] and [`group`]: gain groups and their elements.
//! - [`lattice`] and [`gf2`]: integer and binary linear algebra.
//! - [`graph`] and [`gain`]: multigraphs, walks, gain graphs and balance.
//! - [`bct`]: the binary cycle test, its validity gates and counterexamples.
//! - [`states`]: satisfied states under group actions.
//! - [`plgeom`]: facet gain graphs, reciprocal diagrams and liftings of
//!   cell complexes.

pub mod abelian;
pub mod bct;
pub mod gain;
pub mod gf2;
pub mod graph;
pub mod group;
pub mod lattice;
pub mod plgeom;
pub mod rational;
pub mod states;

pub use abelian::{GroupElement, GroupSpec};
pub use gain::{BalanceReport, GainGraph};
pub use graph::{CycleBasisCandidate, Multigraph, Walk};

/// The guide's chapters compiled as doctests, so every snippet in the book
/// is checked by `cargo test`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gain-graphs.md")]
    mod gain_graphs {}
    #[doc = include_str!("../../../book/src/cycle-test.md")]
    mod cycle_test {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/reciprocals.md")]
    mod reciprocals {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
