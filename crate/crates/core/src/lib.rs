//! Preference-rule mining.
//!
//! Two families of association rules are learned from tabular data whose
//! targets are rankings over a fixed label set:
//!
//! * label ranking association rules (`A -> pi`), scored with
//!   similarity-weighted support and confidence, and combined into a label
//!   ranker ([`lrar`]);
//! * pairwise association rules (`A -> {a > b, c = d, ...}`), mined over the
//!   pairwise decomposition of the targets with the classical interest
//!   measures ([`par`]).
//!
//! [`ranking`] holds the ranking types and correlation coefficients,
//! [`miner`] the bitset depth-first search shared by both rule families, and
//! [`harness`] the cross-validation, confidence tuning and sweep drivers.

pub mod dataset;
pub mod error;
pub mod harness;
pub mod lrar;
pub mod miner;
pub mod par;
pub mod ranking;

pub use dataset::{AttributeKind, AttributeSchema, Dataset, DatasetStats, Value};
pub use error::{Error, Result};
pub use lrar::{Aggregation, LrarModel, LrarParams, LrarRule, MinConf};
pub use miner::{Cover, GenericRule, Item, ItemPayload, ItemSet, Side};
pub use par::{ParParams, ParRule, RuleDescription};
pub use ranking::{
    Consolidation, PairCounts, PairKind, PairwiseRelation, Ranking, SimilarityKind,
};
