//! Markov shifts on finite and countable alphabets, the combinatorics of
//! their Cuntz-Krieger algebras, and strong shift equivalence of
//! nonnegative integer matrices.
//!
//! ```
//! use shiftkit::graph::GraphSpec;
//! use shiftkit::path_space::{validate_model, BoundaryFamily};
//! use shiftkit::semigroup::verify_ck_relations;
//!
//! let g = GraphSpec::finite(vec![vec![1, 1], vec![1, 0]]).unwrap();
//! let model = validate_model(&g, &BoundaryFamily::Auto).unwrap();
//! assert!(verify_ck_relations(&model).unwrap().all_passed());
//! ```
//!
//! The guide in `book/` walks through each module; its snippets run as
//! doc-tests of this crate.

pub mod error;
pub mod graph;
pub mod io;
pub mod path_space;
pub mod cylinder;
pub mod semigroup;
pub mod sse;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/graphs.md")]
    pub struct Graphs;
    #[doc = include_str!("../../../book/src/path-space.md")]
    pub struct PathSpace;
    #[doc = include_str!("../../../book/src/cylinders.md")]
    pub struct Cylinders;
    #[doc = include_str!("../../../book/src/monomials.md")]
    pub struct Monomials;
    #[doc = include_str!("../../../book/src/shift-equivalence.md")]
    pub struct ShiftEquivalence;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
