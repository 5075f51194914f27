//! Executable cryptanalysis: the attacks that can actually be run at desk
//! scale, plus the knapsack density figure.

mod birthday;
mod collisions;
mod density;
mod mitm;

pub use birthday::{birthday_search, birthday_threshold, BirthdayConfig, BirthdayStats};
pub use collisions::{brute_force_collision, product_identity_holds, CollisionPair, MAX_BRUTE_N};
pub use density::assp_density;
pub use mitm::{
    brute_force_solve, fork_dependencies, mitm_subset_sum, mitm_subset_sum_capped,
    SubsetSumInstance, DEFAULT_MITM_CAP, MAX_BRUTE_FORCE_N, SSP_HEADER,
};
