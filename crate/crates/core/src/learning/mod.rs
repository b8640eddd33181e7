//! The classifier behind learning-guided coordination.
//!
//! Solutions sampled on the instance are turned into examples of
//! (normalised IPR, normalised tour position) labelled with whether the item
//! was collected. A small network is fitted to them and then summarised as
//! one IPR threshold per tour position, which is all the search consults.

mod bpr;
mod examples;
mod model;

pub use bpr::{compute_bprs, compute_bprs_traced, lgch, lgch_in_place, BprTable, Probe};
pub(crate) use examples::construction_cost;
pub use examples::{dedup_majority, generate_training_set, solution_counts, solution_examples, Example, TrainingSet};
pub use model::{hidden_width, train, Classifier, TrainConfig, TrainOutcome};
