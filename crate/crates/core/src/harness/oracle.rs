use rayon::prelude::*;

use crate::error::{Result, TtpError};
use crate::eval::evaluate;
use crate::instance::{Instance, ItemId};
use crate::plan::CollectionPlan;
use crate::tour::Tour;

/// Largest city count the exhaustive search accepts.
pub const ORACLE_MAX_CITIES: usize = 9;
/// Largest item count the exhaustive search accepts.
pub const ORACLE_MAX_ITEMS: usize = 16;

/// An optimal solution found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub objective: f64,
    pub tour: Tour,
    pub plan: CollectionPlan,
}

/// Refuses instances beyond the enumeration limits.
pub fn check_oracle_size(inst: &Instance) -> Result<()> {
    if inst.num_cities() > ORACLE_MAX_CITIES || inst.num_items() > ORACLE_MAX_ITEMS {
        return Err(TtpError::SizeGuard(format!(
            "{} cities and {} items, limits are {ORACLE_MAX_CITIES} and {ORACLE_MAX_ITEMS}",
            inst.num_cities(),
            inst.num_items()
        )));
    }
    Ok(())
}

/// Travel time of `tour` with the given per-city collected weights.
fn travel_time(inst: &Instance, tour: &Tour, city_weight: &[u64]) -> f64 {
    let mut w = 0;
    let mut t = 0.0;
    for k in 0..tour.len() {
        let c = tour.city_at(k);
        w += city_weight[c];
        t += inst.distance(c, tour.city_at(k + 1)) / inst.speed(w);
    }
    t
}

struct PlanSearch<'a> {
    inst: &'a Instance,
    tour: &'a Tour,
    order: Vec<ItemId>,
    suffix_profit: Vec<u64>,
    city_weight: Vec<u64>,
    picked: Vec<bool>,
    best: f64,
    best_picked: Vec<bool>,
}

impl PlanSearch<'_> {
    /// Scores the current subset, then branches on the remaining items.
    fn visit(&mut self, depth: usize, weight: u64, profit: u64) {
        let time = travel_time(self.inst, self.tour, &self.city_weight);
        let value = profit as f64 - self.inst.renting_rate() * time;
        if value > self.best {
            self.best = value;
            self.best_picked.clone_from(&self.picked);
        }
        self.branch(depth, weight, profit, time);
    }

    fn branch(&mut self, depth: usize, weight: u64, profit: u64, time: f64) {
        if depth == self.order.len() {
            return;
        }
        // Extra items never shorten the trip.
        if (profit + self.suffix_profit[depth]) as f64 - self.inst.renting_rate() * time <= self.best {
            return;
        }
        let i = self.order[depth];
        let it = *self.inst.item(i);
        if weight + it.weight <= self.inst.capacity() {
            self.picked[i] = true;
            self.city_weight[it.city] += it.weight;
            self.visit(depth + 1, weight + it.weight, profit + it.profit);
            self.city_weight[it.city] -= it.weight;
            self.picked[i] = false;
        }
        self.branch(depth + 1, weight, profit, time);
    }
}

/// Exact best plan for a fixed tour by branch and bound over all subsets.
pub fn best_plan_for_tour(inst: &Instance, tour: &Tour) -> (CollectionPlan, f64) {
    let mut order: Vec<ItemId> = (0..inst.num_items()).collect();
    order.sort_by(|&a, &b| inst.compare_profitability(b, a).then(a.cmp(&b)));
    let mut suffix_profit = vec![0u64; order.len() + 1];
    for d in (0..order.len()).rev() {
        suffix_profit[d] = suffix_profit[d + 1] + inst.item(order[d]).profit;
    }
    let mut s = PlanSearch {
        inst,
        tour,
        order,
        suffix_profit,
        city_weight: vec![0; inst.num_cities()],
        picked: vec![false; inst.num_items()],
        best: f64::NEG_INFINITY,
        best_picked: vec![false; inst.num_items()],
    };
    s.visit(0, 0, 0);
    let items: Vec<ItemId> = (0..inst.num_items()).filter(|&i| s.best_picked[i]).collect();
    let plan = CollectionPlan::from_items(inst, &items).expect("distinct items");
    let obj = evaluate(inst, tour, &plan).objective();
    (plan, obj)
}

/// Rearranges `v` into the next lexicographic permutation; false after the
/// last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f` with every tour of the instance, both directions included, in
/// lexicographic order of the visited cities.
pub fn for_each_tour(n: usize, mut f: impl FnMut(&Tour)) {
    let mut inner: Vec<usize> = (1..n).collect();
    loop {
        f(&Tour::from_inner(&inner).expect("permutation"));
        if !next_permutation(&mut inner) {
            break;
        }
    }
}

/// Exact optimum over every tour and every feasible plan. Ties keep the
/// lexicographically first tour.
pub fn brute_force_solve(inst: &Instance) -> Result<OracleResult> {
    check_oracle_size(inst)?;
    let n = inst.num_cities();
    let firsts: Vec<usize> = (1..n).collect();
    let per_first: Vec<Option<OracleResult>> = firsts
        .par_iter()
        .map(|&first| {
            let mut rest: Vec<usize> = (1..n).filter(|&c| c != first).collect();
            let mut best: Option<OracleResult> = None;
            loop {
                let mut inner = Vec::with_capacity(n - 1);
                inner.push(first);
                inner.extend_from_slice(&rest);
                let tour = Tour::from_inner(&inner).expect("permutation");
                let (plan, obj) = best_plan_for_tour(inst, &tour);
                if best.as_ref().map_or(true, |b| obj > b.objective) {
                    best = Some(OracleResult { objective: obj, tour, plan });
                }
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            best
        })
        .collect();
    let mut best: Option<OracleResult> = None;
    for r in per_first.into_iter().flatten() {
        if best.as_ref().map_or(true, |b| r.objective > b.objective) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one tour"))
}
