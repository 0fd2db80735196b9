//! Experiment plumbing: data preparation, accuracy and metric records.

mod accuracy;
mod discretize;
mod experiment;

pub use accuracy::{agreement, estimate_accuracy, sample_triplets, TripletSample};
pub use discretize::{bin_count, discretize, discretize_text, load_csv};
pub use experiment::{
    derive_seed, run_experiment, write_records, AggregateRecord, ExperimentConfig, ExperimentKind, OneOrMany,
    RatioAggregateRecord, RatioRecord, Record, RunRecord,
};
