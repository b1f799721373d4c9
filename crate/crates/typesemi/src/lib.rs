//! Exact decision procedures for type semigroups and their relatives.
//!
//! The crate computes with three interlocking kinds of objects:
//!
//! * **Preordered abelian monoids**, given either by a finite presentation
//!   (generators and inequality/equality relations) or by an explicit Cayley
//!   table with a full order matrix.  The decision procedures are budgeted and
//!   certificate-producing: a `PROVED` answer carries a replayable derivation,
//!   a `REFUTED` answer carries an exact separating state, and `UNKNOWN`
//!   carries the exhausted budget.  See [`monoid`] and [`states`].
//! * **Finite topological models** — a finite point set together with a
//!   union/intersection-closed family of opens — and the ordered monoid of
//!   ℕ-valued functions with open level sets over them.  See [`lattice`].
//! * **Finite groupoid models and graphs**: inverse semigroups of partial
//!   bijections, their type semigroups, and self-similar group actions on
//!   directed graphs with the purely-infinite/stably-finite dichotomy
//!   classifier.  See [`groupoid`] and [`graph`].
//!
//! All verdict-bearing arithmetic is exact: rational numbers are
//! arbitrary-precision fractions, golden-ratio values live in ℚ(φ), and no
//! floating point occurs anywhere on a verdict path.

pub mod arith;
pub mod graph;
pub mod groupoid;
pub mod lattice;
pub mod lp;
pub mod monoid;
pub mod states;
pub mod verify;

// The book chapters double as doc-tests so the guide cannot drift from the
// API.  `cargo test --doc` compiles every fenced Rust block in `book/src`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/monoids.md")]
    mod monoids {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/groupoids.md")]
    mod groupoids {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/exactness.md")]
    mod exactness {}
}
