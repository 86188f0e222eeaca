//! Conway-type skein invariants of oriented links.
//!
//! Diagrams are PD codes with free loops ([`diagram`]); values live in exact
//! Laurent polynomial rings ([`laurent`]) and are combined by the operations
//! of a generalized Conway algebra ([`algebra`]). [`skein`] evaluates the
//! invariant, [`moves`] rewrites diagrams by Reidemeister moves, and
//! [`catalog`] and [`cli`] provide the corpus and the `skein` binary.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod laurent;
pub mod moves;
pub mod skein;
