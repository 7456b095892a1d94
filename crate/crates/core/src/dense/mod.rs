//! Dense spots, covers, avoiding sets and sparse decompositions.

pub mod avoiding;
pub mod decomposition;
pub mod instance;
pub mod spot;

pub use avoiding::{check_avoiding, AvoidingOptions, AvoidingVerdict};
pub use decomposition::{
    captured_edges, captured_graph, verify_bounded_decomposition, verify_sparse_decomposition, DecompositionParams,
    DecompositionReport, SparseDecomposition, Variant, VerifyOptions,
};
pub use instance::{check_instance_class, BipartiteHost, Instance, InstanceClass, InstanceFile, InstanceParams};
pub use spot::{greedy_dense_cover, is_dense_spot, search_dense_spot, CoverResult, DenseSpot, SpotSearchOptions};
