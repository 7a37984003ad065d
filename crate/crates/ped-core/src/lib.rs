//! Partition-enabled subdata selection for classification.
//!
//! Selects a small, classification-optimal subsample of a large tabular
//! dataset: shallow CART trees partition the data into strata, each stratum
//! receives a sample budget proportional to sqrt(N_l * G_l) (clamped to
//! practical bounds), and twinning draws rows within each stratum so every
//! subsample mirrors its stratum's joint distribution. Random forests fit on
//! the result evaluate how much classification accuracy the subsample keeps.
//!
//! The crate also ships the baselines (uniform and whole-data twinning), the
//! synthetic generators used by the benchmark harness, and a `ped` CLI.

pub mod bench;
pub mod cart;
pub mod data;
pub mod error;
pub mod forest;
pub mod metrics;
pub mod partition;
pub mod sampler;
pub mod seed;

pub use crate::data::{ColumnKind, ColumnSchema, Dataset, GeneratorSpec};
pub use crate::error::{PedError, Result};
pub use crate::partition::{find_partition, Partition, PedConfig};
pub use crate::sampler::{
    allocate, expected_test_gini, select_ped, select_twinning, select_uniform, twin_within,
    AllocationPlan, Subdata,
};
pub use crate::seed::{derive_subseed, Seed};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
