//! Objective evaluation with cached prefix weights and times.
//!
//! For a solution `(t, p)` the state holds the knapsack weight after leaving
//! each tour position and the travelling time to reach each position. Both
//! move operators only disturb a suffix or a window of these arrays, so
//! candidate moves are scored without rebuilding the whole state.

use crate::instance::{Instance, ItemId};
use crate::plan::CollectionPlan;
use crate::tour::{check_segment, Tour};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalState {
    /// Knapsack weight after collecting at positions `0..=k`, `k < n`.
    prefix_weight: Vec<u64>,
    /// Travelling time to reach position `k`, `k <= n`.
    prefix_time: Vec<f64>,
    profit: u64,
    objective: f64,
    feasible: bool,
}

impl EvalState {
    pub fn prefix_weight(&self) -> &[u64] {
        &self.prefix_weight
    }

    pub fn prefix_time(&self) -> &[f64] {
        &self.prefix_time
    }

    pub fn total_time(&self) -> f64 {
        self.prefix_time[self.prefix_time.len() - 1]
    }

    pub fn total_weight(&self) -> u64 {
        self.prefix_weight[self.prefix_weight.len() - 1]
    }

    pub fn total_profit(&self) -> u64 {
        self.profit
    }

    /// Net profit: collected profit minus rent for the travelling time.
    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    fn n(&self) -> usize {
        self.prefix_weight.len()
    }

    fn finish(&mut self, inst: &Instance, plan: &CollectionPlan) {
        self.profit = plan.total_profit();
        self.feasible = plan.is_feasible(inst);
        self.objective = self.profit as f64 - inst.renting_rate() * self.total_time();
    }

    /// Updates the state after `tour` had `[b, e]` reversed. The plan must be
    /// unchanged since the state was computed.
    pub fn reeval_after_two_opt(
        &mut self,
        inst: &Instance,
        tour: &Tour,
        plan: &CollectionPlan,
        b: usize,
        e: usize,
    ) -> Result<()> {
        check_segment(self.n(), b, e)?;
        for k in b..=e {
            self.prefix_weight[k] = self.prefix_weight[k - 1] + plan.city_weight(tour.city_at(k));
        }
        let old = self.prefix_time[e + 1];
        for k in b..=e + 1 {
            self.prefix_time[k] = self.prefix_time[k - 1] + leg_time(inst, tour, k - 1, self.prefix_weight[k - 1]);
        }
        let shift = self.prefix_time[e + 1] - old;
        if shift != 0.0 {
            for k in e + 2..=self.n() {
                self.prefix_time[k] += shift;
            }
        }
        self.finish(inst, plan);
        Ok(())
    }

    /// Updates the state after item `item` was flipped in `plan`.
    pub fn reeval_after_bit_flip(
        &mut self,
        inst: &Instance,
        tour: &Tour,
        plan: &CollectionPlan,
        item: ItemId,
    ) {
        let it = inst.item(item);
        let from = tour.position_of(it.city);
        for k in from..self.n() {
            self.prefix_weight[k] = if plan.is_picked(item) {
                self.prefix_weight[k] + it.weight
            } else {
                self.prefix_weight[k] - it.weight
            };
            self.prefix_time[k + 1] = self.prefix_time[k] + leg_time(inst, tour, k, self.prefix_weight[k]);
        }
        self.finish(inst, plan);
    }

    /// Objective after flipping `item`, leaving the state untouched.
    pub fn bit_flip_objective(
        &self,
        inst: &Instance,
        tour: &Tour,
        plan: &CollectionPlan,
        item: ItemId,
    ) -> f64 {
        let it = inst.item(item);
        let from = tour.position_of(it.city);
        let (profit, add) = if plan.is_picked(item) {
            (self.profit - it.profit, false)
        } else {
            (self.profit + it.profit, true)
        };
        let mut time = self.prefix_time[from];
        for k in from..self.n() {
            let w = if add {
                self.prefix_weight[k] + it.weight
            } else {
                self.prefix_weight[k] - it.weight
            };
            time += leg_time(inst, tour, k, w);
        }
        profit as f64 - inst.renting_rate() * time
    }

    /// Objective of reversing `[b, e]` in `tour` while switching to
    /// `new_plan`, leaving the state untouched.
    ///
    /// `tour` is the tour before reversal. `new_plan` may differ from the plan
    /// this state was computed with only in items located inside the segment.
    /// Costs `O(e - b)` when the total weight is unchanged and `O(n - b)`
    /// otherwise.
    pub fn two_opt_objective(
        &self,
        inst: &Instance,
        tour: &Tour,
        new_plan: &CollectionPlan,
        b: usize,
        e: usize,
    ) -> f64 {
        debug_assert!(b > 0 && b < e && e < self.n());
        let reversed = |k: usize| tour.city_at(e + b - k);
        let mut w = self.prefix_weight[b - 1];
        let mut time = self.prefix_time[b - 1] + inst.distance(tour.city_at(b - 1), tour.city_at(e)) / inst.speed(w);
        let mut prev = tour.city_at(e);
        for k in b..e {
            w += new_plan.city_weight(prev);
            let next = reversed(k + 1);
            time += inst.distance(prev, next) / inst.speed(w);
            prev = next;
        }
        w += new_plan.city_weight(prev);
        time += inst.distance(prev, tour.city_at(e + 1)) / inst.speed(w);

        let old_total = self.total_weight();
        let total_time = if new_plan.total_weight() == old_total {
            debug_assert_eq!(w, self.prefix_weight[e]);
            self.total_time() + time - self.prefix_time[e + 1]
        } else {
            let shift = new_plan.total_weight() as i128 - old_total as i128;
            for k in e + 1..self.n() {
                let wk = (self.prefix_weight[k] as i128 + shift) as u64;
                time += leg_time(inst, tour, k, wk);
            }
            time
        };
        new_plan.total_profit() as f64 - inst.renting_rate() * total_time
    }
}

#[inline]
fn leg_time(inst: &Instance, tour: &Tour, k: usize, weight: u64) -> f64 {
    inst.distance(tour.city_at(k), tour.city_at(k + 1)) / inst.speed(weight)
}

/// Full evaluation of `(tour, plan)` from scratch. Infeasible plans are
/// evaluated too and flagged.
pub fn evaluate(inst: &Instance, tour: &Tour, plan: &CollectionPlan) -> EvalState {
    let n = tour.len();
    let mut prefix_weight = vec![0u64; n];
    let mut prefix_time = vec![0.0; n + 1];
    let mut w = 0u64;
    for k in 0..n {
        w += plan.city_weight(tour.city_at(k));
        prefix_weight[k] = w;
        prefix_time[k + 1] = prefix_time[k] + leg_time(inst, tour, k, w);
    }
    let mut state = EvalState {
        prefix_weight,
        prefix_time,
        profit: 0,
        objective: 0.0,
        feasible: true,
    };
    state.finish(inst, plan);
    state
}

/// Net profit of `(tour, plan)`.
pub fn objective(inst: &Instance, tour: &Tour, plan: &CollectionPlan) -> f64 {
    evaluate(inst, tour, plan).objective()
}

/// Whether `new` beats `old` by more than floating point noise.
#[inline]
pub fn improves(new: f64, old: f64) -> bool {
    new - old > 1e-10 * old.abs().max(1.0)
}

/// Relative closeness used throughout for objective comparisons.
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
