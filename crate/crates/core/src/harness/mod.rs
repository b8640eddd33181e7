//! Experiments, statistics, exhaustive oracle and instance generation.

mod experiment;
mod generator;
mod oracle;
mod stats;

pub use experiment::{
    build_id, load_instances, run_experiment, ExperimentFile, ExperimentReport, ExperimentSettings, NamedInstance,
    Provenance, RunResult, RunRow, Version, VersionSummary,
};
pub use generator::{generate_instance, GeneratorConfig, KnapsackKind};
pub use oracle::{
    best_plan_for_tour, brute_force_solve, check_oracle_size, for_each_tour, next_permutation, OracleResult,
    ORACLE_MAX_CITIES, ORACLE_MAX_ITEMS,
};
pub use stats::{compute_rdi, Rdi, Summary};
