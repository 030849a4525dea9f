//! Exact computations in small extriangulated categories.
//!
//! The crate instantiates extriangulated categories concretely on two
//! backends and verifies structural statements about semibricks, filtration
//! subcategories, wide subcategories and cotorsion/torsion pairs by
//! exhaustive finite-field computation:
//!
//! * [`exact`] — module categories `mod kQ` of representation-finite acyclic
//!   quivers over GF(p), with Ext¹ computed from projective resolutions and
//!   extension classes realized as explicit short exact sequences;
//! * [`derived`] — a shift-window model of the bounded derived category of a
//!   hereditary path algebra, with E(C, A) = Hom(C, A[1]) and realization by
//!   mapping cones of chain maps between projective resolutions.
//!
//! On top of both sit the closure algorithms ([`extri`]): the `∗` operation,
//! filtration closures with exact minimal lengths, simple objects, bricks and
//! semibricks, wide subcategories, and an exhaustive verifier for the
//! bijection between simple semibricks and length wide subcategories.
//! The [`cotorsion`] module adds perpendicular categories, approximation
//! triangles, cotorsion pairs and their correspondence with subsets of a
//! semibrick, simple-minded systems, and torsion pairs in the derived window.
//!
//! Start with the crate examples (`cargo run --example catalog_tour`) or the
//! thin `extricat` CLI.

pub mod catalog;
pub mod cotorsion;
pub mod derived;
pub mod error;
pub mod exact;
pub mod extri;
pub mod fitting;
pub mod linalg;
pub mod quiver;
pub mod report;

pub use error::{Error, Result};
