//! Bit-flip packing search and the annealing baseline.

use rand::seq::SliceRandom;
use rand::Rng;

use super::Clock;
use crate::coordination::{select_marginal_items, TrendLines};
use crate::eval::{evaluate, improves, EvalState};
use crate::instance::{Instance, ItemId};
use crate::plan::CollectionPlan;
use crate::tour::Tour;

/// Which items of a tour segment the packing search may flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemSelector {
    /// Every item in a city of the segment.
    TourSegment,
    /// Only the marginal items of the segment, re-derived after each
    /// accepted flip.
    Marginal,
}

/// Items located at positions `b..=e` of `tour`, in position order.
pub fn segment_items(inst: &Instance, tour: &Tour, b: usize, e: usize) -> Vec<ItemId> {
    (b..=e).flat_map(|k| inst.items_at(tour.city_at(k)).iter().copied()).collect()
}

fn select(
    inst: &Instance,
    tour: &Tour,
    plan: &CollectionPlan,
    b: usize,
    e: usize,
    selector: ItemSelector,
) -> Vec<ItemId> {
    match selector {
        ItemSelector::TourSegment => segment_items(inst, tour, b, e),
        ItemSelector::Marginal => {
            let trend = TrendLines::build(inst, tour, plan);
            select_marginal_items(inst, tour, plan, &trend, b, e)
        }
    }
}

/// Random-order first-improvement bit-flip search over the items selected
/// from positions `b..=e`. A flip is kept only when it is feasible and
/// strictly raises the objective; after a kept flip every selected item is
/// eligible again. Stops when no eligible item is left or the clock runs
/// out.
#[allow(clippy::too_many_arguments)]
pub fn kps<R: Rng>(
    inst: &Instance,
    tour: &Tour,
    plan: &CollectionPlan,
    b: usize,
    e: usize,
    selector: ItemSelector,
    rng: &mut R,
    clock: &Clock,
) -> CollectionPlan {
    let mut out = plan.clone();
    let mut state = evaluate(inst, tour, &out);
    kps_with_state(inst, tour, &mut out, &mut state, b, e, selector, rng, clock);
    out
}

/// [`kps`] on a plan and its matching evaluation state, both updated in
/// place. Returns the number of kept flips.
#[allow(clippy::too_many_arguments)]
pub fn kps_with_state<R: Rng>(
    inst: &Instance,
    tour: &Tour,
    plan: &mut CollectionPlan,
    state: &mut EvalState,
    b: usize,
    e: usize,
    selector: ItemSelector,
    rng: &mut R,
    clock: &Clock,
) -> usize {
    if b > e {
        return 0;
    }
    let mut unchecked = select(inst, tour, plan, b, e, selector);
    let mut kept = 0;
    while !unchecked.is_empty() {
        if clock.tick() {
            break;
        }
        let i = unchecked.swap_remove(rng.gen_range(0..unchecked.len()));
        if !plan.flip_is_feasible(inst, i) {
            continue;
        }
        let candidate = state.bit_flip_objective(inst, tour, plan, i);
        if improves(candidate, state.objective()) {
            plan.flip(inst, i);
            state.reeval_after_bit_flip(inst, tour, plan, i);
            kept += 1;
            unchecked = select(inst, tour, plan, b, e, selector);
        }
    }
    kept
}

/// Geometric cooling factor applied after each sweep.
pub const SAS_COOLING: f64 = 0.95;
/// The walk stops once the temperature falls below this fraction of the
/// start temperature.
pub const SAS_FROZEN: f64 = 1e-4;

/// Simulated annealing over single bit flips of all items, used as a
/// packing baseline. The start temperature makes an average worsening flip
/// of a random probe sweep accepted with probability one half. Returns the
/// best plan seen.
pub fn kps_sas<R: Rng>(inst: &Instance, tour: &Tour, plan: &CollectionPlan, rng: &mut R, clock: &Clock) -> CollectionPlan {
    let mut cur = plan.clone();
    let state = evaluate(inst, tour, &cur);
    let mut worse = Vec::new();
    for i in 0..inst.num_items() {
        if cur.flip_is_feasible(inst, i) {
            let d = state.bit_flip_objective(inst, tour, &cur, i) - state.objective();
            if d < 0.0 {
                worse.push(-d);
            }
        }
    }
    let t0 = if worse.is_empty() {
        0.0
    } else {
        worse.iter().sum::<f64>() / worse.len() as f64 / std::f64::consts::LN_2
    };
    anneal(inst, tour, &mut cur, state, t0, rng, clock)
}

/// Annealing from an explicit start temperature. Zero gives plain
/// first-improvement hill climbing in random sweeps.
pub fn kps_sas_with_temperature<R: Rng>(
    inst: &Instance,
    tour: &Tour,
    plan: &CollectionPlan,
    t0: f64,
    rng: &mut R,
    clock: &Clock,
) -> CollectionPlan {
    let mut cur = plan.clone();
    let state = evaluate(inst, tour, &cur);
    anneal(inst, tour, &mut cur, state, t0, rng, clock)
}

fn anneal<R: Rng>(
    inst: &Instance,
    tour: &Tour,
    cur: &mut CollectionPlan,
    mut state: EvalState,
    t0: f64,
    rng: &mut R,
    clock: &Clock,
) -> CollectionPlan {
    let mut best = cur.clone();
    let mut best_obj = state.objective();
    let mut order: Vec<ItemId> = (0..inst.num_items()).collect();
    let mut temp = t0;
    'sweeps: loop {
        order.shuffle(rng);
        let mut accepted = 0;
        for &i in &order {
            if clock.tick() {
                break 'sweeps;
            }
            if !cur.flip_is_feasible(inst, i) {
                continue;
            }
            let delta = state.bit_flip_objective(inst, tour, cur, i) - state.objective();
            let take = if temp > 0.0 {
                delta > 0.0 || rng.gen::<f64>() < (delta / temp).exp()
            } else {
                improves(state.objective() + delta, state.objective())
            };
            if take {
                cur.flip(inst, i);
                state.reeval_after_bit_flip(inst, tour, cur, i);
                accepted += 1;
                if improves(state.objective(), best_obj) {
                    best_obj = state.objective();
                    best.clone_from(cur);
                }
            }
        }
        if (t0 > 0.0 && temp <= SAS_FROZEN * t0) || (accepted == 0 && temp <= 1e-3 * t0) {
            break;
        }
        temp *= SAS_COOLING;
    }
    best
}
