//! Regular-pair extraction, matching growth, augmenting paths, the
//! augment-or-separate step and iterated separation.

pub mod extract;
pub mod grow;
pub mod path;
pub mod separate;
pub mod step;

pub use extract::{find_regular_pair_in_spot, ExtractOptions, ExtractRoute, PairFound};
pub use grow::{grow_matching, GrowResult, StopReason};
pub use path::{
    find_augmenting_or_separate, path_thresholds, separation_mass, validate_path, AlternatingPath, PathLevel,
    PathReport, SeparationOrPath,
};
pub use separate::{separate, verify_separation, RoundRecord, SeparateParams, SeparationChecks, SeparationResult};
pub use step::{augment_or_separate, pairs_nest, AugmentOutcome, AugmentParams, Improvement, StageRecord};
