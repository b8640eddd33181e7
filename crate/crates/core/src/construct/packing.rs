//! Constructive collection plans for a fixed tour.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::eval::{evaluate, EvalState};
use crate::instance::{Instance, ItemId};
use crate::plan::CollectionPlan;
use crate::tour::Tour;

/// Upper end of the exponent search interval.
pub const ALPHA_MAX: f64 = 10.0;
/// Number of exponent probes.
pub const ALPHA_PROBES: usize = 20;

/// Distance still to travel from each item's city to the end of the tour.
fn remaining_distance(inst: &Instance, tour: &Tour) -> Vec<f64> {
    let n = tour.len();
    let mut suffix = vec![0.0; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] + inst.distance(tour.city_at(k), tour.city_at(k + 1));
    }
    inst.items()
        .iter()
        .map(|it| suffix[tour.position_of(it.city)].max(f64::MIN_POSITIVE))
        .collect()
}

/// Greedy packing for one exponent: items by descending
/// `(profit / weight)^alpha / remaining_distance`, admitted while they fit.
/// Returns the best prefix of the admission sequence and its objective.
fn pack_for_alpha(inst: &Instance, tour: &Tour, remaining: &[f64], alpha: f64) -> (Vec<ItemId>, f64) {
    let mut scored: Vec<(f64, ItemId)> = (0..inst.num_items())
        .map(|i| (alpha * inst.ipr(i).ln() - remaining[i].ln(), i))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut plan = CollectionPlan::empty(inst);
    let mut state = evaluate(inst, tour, &plan);
    let mut best = state.objective();
    let mut admitted = Vec::new();
    let mut best_len = 0;
    let stall_limit = (inst.num_items() / 10).max(20);
    let mut stall = 0;
    for &(_, i) in &scored {
        if !plan.try_pick(inst, i) {
            continue;
        }
        state.reeval_after_bit_flip(inst, tour, &plan, i);
        admitted.push(i);
        if state.objective() > best {
            best = state.objective();
            best_len = admitted.len();
            stall = 0;
        } else {
            stall += 1;
            if stall >= stall_limit {
                break;
            }
        }
        if plan.total_weight() == inst.capacity() {
            break;
        }
    }
    admitted.truncate(best_len);
    (admitted, best)
}

/// Score-based greedy packing with a golden-section search over the
/// profitability exponent in `[0, ALPHA_MAX]`.
pub fn pack_iterative(inst: &Instance, tour: &Tour) -> CollectionPlan {
    let remaining = remaining_distance(inst, tour);
    let mut best: (Vec<ItemId>, f64) = (Vec::new(), evaluate(inst, tour, &CollectionPlan::empty(inst)).objective());
    let probe = |alpha: f64, best: &mut (Vec<ItemId>, f64)| -> f64 {
        let (items, obj) = pack_for_alpha(inst, tour, &remaining, alpha);
        if obj > best.1 {
            *best = (items, obj);
        }
        obj
    };

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, ALPHA_MAX);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = probe(x1, &mut best);
    let mut f2 = probe(x2, &mut best);
    for _ in 2..ALPHA_PROBES {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = probe(x1, &mut best);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = probe(x2, &mut best);
        }
    }
    CollectionPlan::from_items(inst, &best.0).expect("admitted items are distinct")
}

/// Heap entry ordered by gain, then by lower item id.
struct Candidate {
    gain: f64,
    item: ItemId,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain.total_cmp(&other.gain).then(other.item.cmp(&self.item))
    }
}

/// Greedy insertion by exact objective delta: repeatedly add the fitting
/// item with the largest strictly positive gain.
///
/// Travel time per leg is convex in the carried weight, so an item's gain
/// can only shrink as others are added. Stale gains are therefore upper
/// bounds and are refreshed lazily.
pub fn insertion_pack(inst: &Instance, tour: &Tour) -> CollectionPlan {
    let mut plan = CollectionPlan::empty(inst);
    let mut state = evaluate(inst, tour, &plan);
    let mut heap: BinaryHeap<Candidate> = (0..inst.num_items())
        .filter(|&i| plan.flip_is_feasible(inst, i))
        .map(|i| Candidate { gain: state.bit_flip_objective(inst, tour, &plan, i) - state.objective(), item: i })
        .filter(|c| c.gain > 0.0)
        .collect();
    while let Some(top) = heap.pop() {
        if !plan.flip_is_feasible(inst, top.item) {
            continue;
        }
        let gain = state.bit_flip_objective(inst, tour, &plan, top.item) - state.objective();
        if gain <= 0.0 {
            continue;
        }
        if heap.peek().is_some_and(|next| gain < next.gain) {
            heap.push(Candidate { gain, item: top.item });
            continue;
        }
        plan.flip(inst, top.item);
        state.reeval_after_bit_flip(inst, tour, &plan, top.item);
    }
    plan
}

/// The better of the two constructive plans.
pub fn init_collection_plan(inst: &Instance, tour: &Tour) -> CollectionPlan {
    let a = pack_iterative(inst, tour);
    let b = insertion_pack(inst, tour);
    let na = evaluate(inst, tour, &a).objective();
    let nb = evaluate(inst, tour, &b).objective();
    if nb > na {
        b
    } else {
        a
    }
}

/// Evaluated plan convenience for callers that need the state as well.
pub fn init_evaluated(inst: &Instance, tour: &Tour) -> (CollectionPlan, EvalState) {
    let plan = init_collection_plan(inst, tour);
    let state = evaluate(inst, tour, &plan);
    (plan, state)
}
