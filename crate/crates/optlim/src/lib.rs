//! Optimistic limits of the colored Jones polynomial and the Kashaev
//! invariant computed directly from a knot diagram.
//!
//! The pipeline parses a PD code ([`diagram`]), opens it into a (1,1)-tangle,
//! builds the potentials `V` and `W` ([`potential`]) together with the
//! octahedral triangulations ([`triangulation`]), solves the hyperbolicity
//! equations ([`solver`]) and reports the complex volume. [`identities`]
//! checks the dilogarithm identities relating the two potentials.

pub mod cli;
pub mod diagram;
pub mod identities;
pub mod numerics;
pub mod potential;
pub mod solver;
pub mod triangulation;

pub use numerics::{Cx, Real};
