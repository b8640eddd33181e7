//! Random instances and plain reference computations shared by the
//! integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use ttp_core::{evaluate, CollectionPlan, Instance, InstanceSpec, Item, Metric, Tour};

/// Random Euclidean instance with `n` cities and `m` items on cities `1..n`.
/// Capacity is a random fraction of the total weight and the renting rate
/// is small enough that collecting usually pays off.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, m: usize) -> Instance {
    let coords: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0..100) as f64, rng.gen_range(0..100) as f64)).collect();
    let items: Vec<Item> = (0..m)
        .map(|_| Item {
            profit: rng.gen_range(1..=60),
            weight: rng.gen_range(1..=30),
            city: rng.gen_range(1..n),
        })
        .collect();
    let total: u64 = items.iter().map(|it| it.weight).sum();
    let capacity = ((total as f64 * rng.gen_range(0.2..0.9)) as u64).max(1);
    let min_speed = 0.1;
    Instance::new(InstanceSpec {
        name: "random".into(),
        knapsack_data_type: "uncorrelated".into(),
        coords,
        explicit_distances: None,
        items,
        capacity,
        renting_rate: rng.gen_range(0.01..0.4),
        min_speed,
        max_speed: 1.0,
        metric: Metric::Ceil2d,
    })
    .expect("random instance is valid")
}

/// Instance with an explicit distance matrix.
pub fn explicit_instance(
    distances: Vec<f64>,
    items: Vec<Item>,
    capacity: u64,
    renting_rate: f64,
    speeds: (f64, f64),
) -> Instance {
    let n = (distances.len() as f64).sqrt() as usize;
    Instance::new(InstanceSpec {
        name: "explicit".into(),
        knapsack_data_type: "hand".into(),
        coords: vec![(0.0, 0.0); n],
        explicit_distances: Some(distances),
        items,
        capacity,
        renting_rate,
        min_speed: speeds.0,
        max_speed: speeds.1,
        metric: Metric::Explicit,
    })
    .expect("explicit instance is valid")
}

pub fn random_tour<R: Rng>(rng: &mut R, n: usize) -> Tour {
    let mut inner: Vec<usize> = (1..n).collect();
    inner.shuffle(rng);
    Tour::from_inner(&inner).unwrap()
}

/// Random feasible plan: items in random order, each kept with
/// probability one half while it fits.
pub fn random_plan<R: Rng>(rng: &mut R, inst: &Instance) -> CollectionPlan {
    let mut order: Vec<usize> = (0..inst.num_items()).collect();
    order.shuffle(rng);
    let mut plan = CollectionPlan::empty(inst);
    for i in order {
        if rng.gen_bool(0.5) {
            plan.try_pick(inst, i);
        }
    }
    plan
}

/// Objective straight from the definition: walk the tour, accumulate the
/// weight picked at each city, divide each leg by the speed at that weight.
pub fn reference_objective(inst: &Instance, tour: &Tour, plan: &CollectionPlan) -> f64 {
    let n = inst.num_cities();
    let (vmax, vmin, cap) = (inst.max_speed(), inst.min_speed(), inst.capacity() as f64);
    let mut weight = 0.0;
    let mut time = 0.0;
    for k in 0..n {
        let c = tour.city_at(k);
        for i in 0..inst.num_items() {
            if plan.is_picked(i) && inst.item(i).city == c {
                weight += inst.item(i).weight as f64;
            }
        }
        let speed = (vmax - weight * (vmax - vmin) / cap).max(vmin);
        time += inst.distance(c, tour.city_at(k + 1)) / speed;
    }
    let profit: u64 = (0..inst.num_items()).filter(|&i| plan.is_picked(i)).map(|i| inst.item(i).profit).sum();
    profit as f64 - inst.renting_rate() * time
}

/// Every tour of `n` cities starting at city 0, by recursive enumeration.
pub fn all_tours(n: usize) -> Vec<Tour> {
    fn rec(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Tour>) {
        if left.is_empty() {
            out.push(Tour::from_inner(prefix).unwrap());
            return;
        }
        for k in 0..left.len() {
            let c = left.remove(k);
            prefix.push(c);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(k, c);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (1..n).collect(), &mut out);
    out
}

/// Every feasible plan, by subset bitmask.
pub fn all_plans(inst: &Instance) -> Vec<CollectionPlan> {
    let m = inst.num_items();
    (0u32..1 << m)
        .filter_map(|mask| {
            let items: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let plan = CollectionPlan::from_items(inst, &items).unwrap();
            plan.is_feasible(inst).then_some(plan)
        })
        .collect()
}

/// Exhaustive optimum over all tours and all feasible plans.
pub fn naive_optimum(inst: &Instance) -> f64 {
    let plans = all_plans(inst);
    let mut best = f64::NEG_INFINITY;
    for t in all_tours(inst.num_cities()) {
        for p in &plans {
            best = best.max(evaluate(inst, &t, p).objective());
        }
    }
    best
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn ratio(inst: &Instance, i: usize) -> f64 {
    inst.item(i).profit as f64 / inst.item(i).weight as f64
}

/// Items of city `c` by descending ratio, then profit, then ascending id.
fn by_profitability(inst: &Instance, c: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..inst.num_items()).filter(|&i| inst.item(i).city == c).collect();
    v.sort_by(|&a, &b| {
        ratio(inst, b)
            .total_cmp(&ratio(inst, a))
            .then(inst.item(b).profit.cmp(&inst.item(a).profit))
            .then(a.cmp(&b))
    });
    v
}

/// Lowest collected and highest uncollected ratio per tour position, with
/// `+inf` and `-inf` where there is none.
pub fn literal_levels(inst: &Instance, tour: &Tour, plan: &CollectionPlan) -> (Vec<f64>, Vec<f64>) {
    let n = inst.num_cities();
    let mut low = vec![f64::INFINITY; n];
    let mut high = vec![f64::NEG_INFINITY; n];
    for k in 1..n {
        let c = tour.city_at(k);
        for i in 0..inst.num_items() {
            if inst.item(i).city != c {
                continue;
            }
            if plan.is_picked(i) {
                low[k] = low[k].min(ratio(inst, i));
            } else {
                high[k] = high[k].max(ratio(inst, i));
            }
        }
    }
    (low, high)
}

fn running_min_to(low: &[f64], k: usize) -> f64 {
    low[1..=k].iter().copied().fold(f64::INFINITY, f64::min)
}

fn running_max_from(high: &[f64], k: usize) -> f64 {
    high[k..].iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Marginal items of `[b, e]` straight from their definitions.
pub fn literal_marginal(inst: &Instance, tour: &Tour, plan: &CollectionPlan, b: usize, e: usize) -> Vec<usize> {
    let (low, high) = literal_levels(inst, tour, plan);
    let mut out = Vec::new();
    for k in b..=e {
        let c = tour.city_at(k);
        let collected = (0..inst.num_items()).filter(|&i| {
            inst.item(i).city == c
                && plan.is_picked(i)
                && ratio(inst, i) == low[k]
                && low[k] == running_min_to(&low, k)
                && (b..k).all(|j| low[j] != low[k])
        });
        out.extend(collected.min());
        let uncollected = (0..inst.num_items()).filter(|&i| {
            inst.item(i).city == c
                && !plan.is_picked(i)
                && ratio(inst, i) == high[k]
                && high[k] == running_max_from(&high, k)
                && (k + 1..=e).all(|j| high[j] != high[k])
        });
        out.extend(uncollected.min());
    }
    out.sort_unstable();
    out
}

/// Trend-line repair as a two-pass loop over the reversed segment. Levels
/// and envelopes come from the solution before the reversal.
pub fn literal_pgch(inst: &Instance, tour: &Tour, plan: &CollectionPlan, b: usize, e: usize) -> CollectionPlan {
    let (low, high) = literal_levels(inst, tour, plan);
    let mut reversed = tour.clone();
    reversed.two_opt(b, e).unwrap();
    let mut p = plan.clone();
    for k in b..=e {
        let bound = running_min_to(&low, k);
        for i in by_profitability(inst, reversed.city_at(k)) {
            if p.is_picked(i) && ratio(inst, i) < bound {
                p.flip(inst, i);
            }
        }
    }
    for k in (b..=e).rev() {
        let bound = running_max_from(&high, k);
        for i in by_profitability(inst, reversed.city_at(k)) {
            if !p.is_picked(i) && ratio(inst, i) > bound && p.total_weight() + inst.item(i).weight <= inst.capacity() {
                p.flip(inst, i);
            }
        }
    }
    p
}

/// Learned repair that queries `predict(normalised ratio, normalised
/// position)` for every item instead of using a threshold table.
pub fn direct_lgch(
    inst: &Instance,
    tour: &Tour,
    plan: &CollectionPlan,
    predict: impl Fn(f64, f64) -> bool,
    b: usize,
    e: usize,
) -> CollectionPlan {
    let n = inst.num_cities() as f64;
    let max_r = (0..inst.num_items()).map(|i| ratio(inst, i)).fold(0.0, f64::max);
    let mut reversed = tour.clone();
    reversed.two_opt(b, e).unwrap();
    let mut p = plan.clone();
    for k in b..=e {
        for i in by_profitability(inst, reversed.city_at(k)) {
            if p.is_picked(i) && !predict(ratio(inst, i) / max_r, k as f64 / n) {
                p.flip(inst, i);
            }
        }
    }
    for k in (b..=e).rev() {
        for i in by_profitability(inst, reversed.city_at(k)) {
            if !p.is_picked(i)
                && predict(ratio(inst, i) / max_r, k as f64 / n)
                && p.total_weight() + inst.item(i).weight <= inst.capacity()
            {
                p.flip(inst, i);
            }
        }
    }
    p
}

/// Like [`random_instance`] but with tiny profits and weights, so equal
/// ratios are common.
pub fn tie_heavy_instance<R: Rng>(rng: &mut R, n: usize, m: usize) -> Instance {
    let mut spec = random_instance(rng, n, m).spec().clone();
    for it in &mut spec.items {
        it.profit = rng.gen_range(1..=4);
        it.weight = rng.gen_range(1..=2);
    }
    let total: u64 = spec.items.iter().map(|it| it.weight).sum();
    spec.capacity = ((total as f64 * rng.gen_range(0.3..0.9)) as u64).max(1);
    Instance::new(spec).unwrap()
}

/// Random network whose output never decreases in the first input: every
/// weight on a path from it is non-negative. The output bias is chosen so
/// the decision boundary crosses the unit square.
pub fn monotone_model<R: Rng>(rng: &mut R, width: usize) -> ttp_core::learning::Classifier {
    use ttp_core::learning::Classifier;
    let mut c = Classifier::random(width, rng);
    let h = width;
    let (w1, b1, w2, b2, w3) = (0, 2 * h, 3 * h, 3 * h + h * h, 4 * h + h * h);
    let p = c.params_mut();
    for j in 0..h {
        p[w1 + 2 * j] = p[w1 + 2 * j].abs();
        p[b1 + j] = rng.gen_range(-0.5..0.5);
        p[b2 + j] = rng.gen_range(-0.5..0.5);
    }
    for x in &mut p[w2..b2] {
        *x = x.abs();
    }
    for x in &mut p[w3..w3 + h] {
        *x = x.abs();
    }
    let last = p.len() - 1;
    p[last] = 0.0;
    let pivot = c.logit(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
    c.params_mut()[last] = -pivot;
    c
}
