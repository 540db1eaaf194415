//! Exact classification of ρ-uniform one-sided Markov shifts on finite
//! stochastic graphs, up to measure-preserving isomorphism.

pub mod classify;
pub mod contraction;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod graph;
pub mod homo;
pub mod perm;
pub mod reduction;
pub mod simulate;

pub use error::{Error, Result};
pub use graph::{Rational, Rho, StochasticGraph};
pub use perm::Permutation;
