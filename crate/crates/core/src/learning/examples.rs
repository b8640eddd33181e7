use std::collections::BTreeMap;

use rand::Rng;

use crate::construct::{build_tour, init_collection_plan, NeighborLists};
use crate::error::{Result, TtpError};
use crate::instance::Instance;
use crate::plan::CollectionPlan;
use crate::search::{kps, Clock, ItemSelector};
use crate::tour::Tour;

/// One labelled feature pair: normalised IPR and normalised tour position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Example {
    pub nipr: f64,
    pub np: f64,
    pub label: bool,
}

/// Deduplicated examples for fitting and for model selection.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingSet {
    pub train: Vec<Example>,
    pub validation: Vec<Example>,
}

/// Number of solutions sampled for fitting and for validation.
pub fn solution_counts(inst: &Instance) -> (usize, usize) {
    let per_city = inst.max_items_per_city().max(1);
    let train = 30usize.div_ceil(per_city);
    (train, train.div_ceil(2))
}

/// Feature pairs of every item in a solution, labelled by whether it is
/// collected.
pub fn solution_examples(inst: &Instance, tour: &Tour, plan: &CollectionPlan) -> Vec<Example> {
    let n = tour.len() as f64;
    let max_r = inst.max_ipr();
    (0..inst.num_items())
        .map(|i| Example {
            nipr: inst.ipr(i) / max_r,
            np: tour.position_of(inst.item(i).city) as f64 / n,
            label: plan.is_picked(i),
        })
        .collect()
}

/// Collapses repeated feature pairs to one example carrying the majority
/// label. Ties count as collected. Output is ordered by the pair's bits.
pub fn dedup_majority(examples: &[Example]) -> Vec<Example> {
    let mut votes: BTreeMap<(u64, u64), (usize, usize)> = BTreeMap::new();
    for ex in examples {
        let v = votes.entry((ex.nipr.to_bits(), ex.np.to_bits())).or_default();
        if ex.label {
            v.0 += 1;
        } else {
            v.1 += 1;
        }
    }
    votes
        .into_iter()
        .map(|((a, b), (yes, no))| Example {
            nipr: f64::from_bits(a),
            np: f64::from_bits(b),
            label: yes >= no,
        })
        .collect()
}

/// Samples solutions (constructed tour, constructive plan, then marginal
/// bit-flip search) and turns them into a training set. Every finished
/// solution is passed to `visit`. Stops early when the clock runs out, and
/// fails only if not a single solution was finished.
pub fn generate_training_set<R: Rng>(
    inst: &Instance,
    neighbors: &NeighborLists,
    rng: &mut R,
    chains: usize,
    clock: &Clock,
    mut visit: impl FnMut(&Tour, &CollectionPlan),
) -> Result<TrainingSet> {
    let (n_train, n_val) = solution_counts(inst);
    let n = inst.num_cities();
    let mut raw_train = Vec::new();
    let mut raw_val = Vec::new();
    for s in 0..n_train + n_val {
        if s > 0 && clock.expired() {
            break;
        }
        let tour = build_tour(inst, neighbors, rng, chains);
        let plan = init_collection_plan(inst, &tour);
        clock.charge(construction_cost(inst, chains));
        let plan = kps(inst, &tour, &plan, 1, n - 1, ItemSelector::Marginal, rng, clock);
        visit(&tour, &plan);
        let ex = solution_examples(inst, &tour, &plan);
        if s < n_train {
            raw_train.extend(ex);
        } else {
            raw_val.extend(ex);
        }
    }
    if raw_train.is_empty() {
        return Err(TtpError::Training("no training solution finished within the budget".into()));
    }
    Ok(TrainingSet {
        train: dedup_majority(&raw_train),
        validation: dedup_majority(&raw_val),
    })
}

/// Work units charged for building one tour and plan.
pub(crate) fn construction_cost(inst: &Instance, chains: usize) -> u64 {
    1 + ((inst.num_cities() * (chains + 1) + inst.num_items()) / 4) as u64
}
