//! Toolkit for sparse decompositions of graphs with many high-degree
//! vertices: regularity certification, dense spots, regularized
//! matchings, augmenting-path separation and the rough structure
//! pipeline built on them.

pub mod augment;
pub mod batch;
pub mod dense;
pub mod error;
pub mod generate;
pub mod graph;
pub mod lks;
pub mod matching;
pub mod params;
pub mod rational;
pub mod regularity;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, VertexSet};
pub use rational::Rational;
