//! Configuration-free r-graphs: freeness checks, claims, cluster merging,
//! weight certificates and exact small-n extremal search.
//!
//! Vertices are `0..n`. Every exhaustive query takes a [`Budget`] and either
//! answers exactly or fails with [`Error::BudgetExceeded`].

pub mod bitset;
pub mod budget;
pub mod canon;
pub mod certify;
pub mod claims;
pub mod configs;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod merging;
pub mod rational;
pub mod search;
mod spansearch;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use graph::{EdgeSubset, HyperGraph, Vertex, VertexPair};
pub use rational::Rational;
