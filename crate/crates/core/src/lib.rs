//! Generalized graph codes on balanced ℓ-partite regular graphs.
//!
//! A graph code places one field symbol on every edge of a graph and asks
//! that, at every vertex, the symbols on the incident edges form a codeword of
//! an inner code. This crate builds such codes from balanced multipartite
//! graphs, computes their exact parameters `[N, K, D]`, evaluates the spectral
//! lower bound `D ≥ d·m·(d − λ₂)/((ℓ − 1)n − λ₂)`, and checks each step of that
//! bound's argument on concrete codewords.


pub mod certificate;
pub mod codes;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod graphcode;
pub mod graphs;
pub mod matrix;
pub mod mindist;
pub mod spec;

pub use codes::{Codeword, LinearCode};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use graphcode::{BoundOutcome, BoundValue, EdgeAssignment, GeneralizedGraphCode};
pub use graphs::{EdgeOrder, Lambda2, PartiteGraph};
pub use matrix::{GfMatrix, RealSymMatrix};
pub use mindist::{DistanceBracket, Engine, SearchOptions};
