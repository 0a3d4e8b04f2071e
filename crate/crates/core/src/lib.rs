//! Exact rational geometry for planar order types.
//!
//! The crate provides:
//!
//! * exact predicates over arbitrary-precision rationals and a rational
//!   parameterization of the unit circle ([`geometry`]),
//! * chirotopes, canonical order-type codes and sub-order containment
//!   ([`order_type`]),
//! * the staircase-pair representation of configurations with at most two
//!   interior points together with a constructive inscription algorithm
//!   ([`staircase`]),
//! * exact counting of staircase pairs, lozenge tilings and conowheel order
//!   types plus a small-scale order-type census ([`counting`]),
//! * exact fractional-linear maps of the circle, projections through interior
//!   points and the two-inscribed-polygons finder ([`mobius`]),
//! * generators for the named point families used throughout ([`families`]),
//! * a seeded derivative-free search for inscribed realizations with exact
//!   snap-and-verify witnesses ([`search`]),
//! * plain-text file formats for points, chirotopes, staircase pairs and
//!   count reports ([`io`]).
//!
//! All geometric decisions are made over `Q`; floating point only appears in
//! the search heuristics and in diagnostic output. Heavy batch operations run
//! on rayon when the `parallel` feature (default) is enabled and fall back to
//! sequential iteration otherwise; see [`exec`].

pub mod exec;
pub mod rat;

pub mod geometry;
pub mod mobius;
pub mod order_type;

pub mod counting;
pub mod staircase;

pub mod families;
pub mod search;

pub mod io;

pub use geometry::{CirclePoint, Configuration, LabeledPoint, Point};
pub use order_type::{CanonicalCode, Chirotope};
pub use rat::Rat;
