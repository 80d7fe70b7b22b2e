//! Small-set vertex expanders: certification, generation, and embeddings.
//!
//! An `(alpha, t)`-expander is a graph in which every vertex set `X` with
//! `|X| <= alpha * n / t` has an external neighborhood of size at least
//! `t * |X|`. This crate certifies and refutes that property, generates
//! random graphs that exhibit it, embeds bounded-size graphs and large
//! complete graphs as minors inside such hosts, and computes counting
//! bounds on how large "contains every small graph as a minor" forces a
//! host to be.

pub mod error;
pub mod expansion;
pub mod generators;
pub mod graph;
pub mod numeric;
pub mod seeds;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::{Distance, Graph, IndexMap};
pub use vertex_set::VertexSet;
