//! Randomized approximation of the Tutte polynomial and the random-cluster
//! partition function on dense graphs.
//!
//! The library estimates T_G(x, y) by sampling bond percolation subgraphs
//! G_p at p = (y-1)/y, averaging Q^kappa with Q = (x-1)(y-1), and scaling by
//! zeta = y^m / ((x-1)(y-1)^n). The same engine estimates the random-cluster
//! partition function Z = E(Q^kappa(G_p)) for decoupled (p, Q) and the edge
//! distribution function lambda(A) through contraction. Exhaustive oracles
//! validate everything on small instances, graph-family generators produce
//! dense/subdense/superdense and power-law inputs, and diagnostics probe the
//! variance-bounding constructions the sampler's guarantees rest on.

pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod sampler;

pub use error::{Error, Result};
