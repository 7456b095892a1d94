//! Rough structure of graphs with many high-degree vertices: vertex
//! classes, the cluster-graph stage, the pipeline and its verifiers.

pub mod classes;
pub mod cluster;
pub mod pipeline;
pub mod verify;

pub use classes::{compute_s0, compute_xtriple, hat_deg, XTriple};
pub use cluster::{
    build_sr, choose_separator_pair, cluster_graph, extend_to_n1, isolated_s0, separator_objective, ClosureReport,
    ClusterClasses, ClusterSide, Extension, SeparatorPair,
};
pub use pipeline::{
    cluster_stage, default_omega, pairs_inside, pairs_meeting, rough_structure, separation_input, ClusterGraphState,
    Dichotomy, SeparationInput, SeparationSummary, StructureOutput, StructureParams,
};
pub use verify::{
    check_hypotheses, validate_neither, verify_structure, AssertionVerdict, HypothesisReport, StructureReport,
    ValidatorReport,
};
