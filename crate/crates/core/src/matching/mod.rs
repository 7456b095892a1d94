//! Maximum matchings, factor-criticality, the separator-matching pair and
//! regularized matchings.

pub mod blossom;
pub mod gallai_edmonds;
pub mod regularized;

pub use blossom::{is_matching, matching_number, maximum_matching, maximum_mate};
pub use gallai_edmonds::{
    factor_critical_within, gallai_edmonds, is_factor_critical, verify_gallai_edmonds, FactorCriticalReport,
    GallaiEdmonds, GallaiEdmondsReport, NearPerfect,
};
pub use regularized::{
    absorbs, check_cluster_size_bound, spots_absorb, verify_regularized_matching, Accessors, ClusterBound,
    MatchingVerdict, PairVerdict, RegularizedMatching, SetPair,
};
