//! Finite and localized rings, their one-generated subrings, and compressed
//! commuting graphs.

pub mod arith;
pub mod dsl;
pub mod graph;
pub mod integral;
pub mod localized;
pub mod poly;
pub mod ring;
pub mod semidirect;
pub mod subring;
pub mod verify;

pub use arith::divisor_count;
pub use graph::{CompressedGraph, Isomorphism, OutputFormat};
pub use poly::IntPolynomial;
pub use ring::{Budget, Ring, RingError};
