use std::fmt::Write as _;

use super::Classifier;
use crate::coordination::reversed_city;
use crate::instance::{Instance, ItemId};
use crate::plan::CollectionPlan;
use crate::tour::Tour;

/// Per-position IPR thresholds: an item at position `k` is predicted
/// collected iff its IPR is at least `bound(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BprTable {
    bounds: Vec<f64>,
    sorted: Vec<f64>,
}

/// One model query made while building the table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub position: usize,
    pub ipr: f64,
    pub predicted: bool,
}

impl BprTable {
    /// Threshold at tour position `k`; position 0 never collects.
    #[inline]
    pub fn bound(&self, k: usize) -> f64 {
        self.bounds[k]
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    /// Distinct IPRs in increasing order.
    pub fn sorted_iprs(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    /// Table with the same threshold at every position.
    pub fn uniform(inst: &Instance, bound: f64) -> Self {
        let mut bounds = vec![bound; inst.num_cities()];
        bounds[0] = f64::INFINITY;
        BprTable { bounds, sorted: sorted_iprs(inst) }
    }

    /// Table from explicit thresholds for positions `1..n`.
    pub fn from_bounds(inst: &Instance, inner: &[f64]) -> Self {
        assert_eq!(inner.len() + 1, inst.num_cities());
        let mut bounds = Vec::with_capacity(inner.len() + 1);
        bounds.push(f64::INFINITY);
        bounds.extend_from_slice(inner);
        BprTable { bounds, sorted: sorted_iprs(inst) }
    }

    /// One `position threshold` line per tour position.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (k, b) in self.bounds.iter().enumerate().skip(1) {
            let _ = writeln!(s, "{k} {b}");
        }
        s
    }
}

fn sorted_iprs(inst: &Instance) -> Vec<f64> {
    let mut r = inst.iprs().to_vec();
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

/// Distils `model` into a threshold table by binary search over the
/// distinct IPRs at each position.
pub fn compute_bprs(inst: &Instance, model: &Classifier) -> BprTable {
    compute_bprs_traced(inst, model, |_| {})
}

/// [`compute_bprs`] reporting every model query to `probe`.
pub fn compute_bprs_traced(inst: &Instance, model: &Classifier, mut probe: impl FnMut(Probe)) -> BprTable {
    let sorted = sorted_iprs(inst);
    let n = inst.num_cities();
    let max_r = inst.max_ipr();
    let mut bounds = vec![f64::INFINITY; n];
    for (k, bound) in bounds.iter_mut().enumerate().skip(1) {
        let np = k as f64 / n as f64;
        let (mut lo, mut hi) = (0, sorted.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let predicted = model.predict(sorted[mid] / max_r, np);
            probe(Probe { position: k, ipr: sorted[mid], predicted });
            if predicted {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        *bound = sorted.get(lo).copied().unwrap_or(max_r + 1.0);
    }
    BprTable { bounds, sorted }
}

/// Learning-guided repair of `plan` for the tour obtained by reversing
/// `[b, e]` of `tour`. Segment items below their new position's threshold
/// are dropped, then, walking the segment backwards, items at or above it
/// are collected while they fit. Changed items are appended to `flips`.
pub fn lgch_in_place(
    inst: &Instance,
    tour: &Tour,
    bpr: &BprTable,
    plan: &mut CollectionPlan,
    b: usize,
    e: usize,
    flips: &mut Vec<ItemId>,
) {
    for k in b..=e {
        let bound = bpr.bound(k);
        for &i in inst.items_at(reversed_city(tour, b, e, k)) {
            if plan.is_picked(i) && inst.ipr(i) < bound {
                plan.flip(inst, i);
                flips.push(i);
            }
        }
    }
    for k in (b..=e).rev() {
        let bound = bpr.bound(k);
        for &i in inst.items_at(reversed_city(tour, b, e, k)) {
            if !plan.is_picked(i) && inst.ipr(i) >= bound && plan.try_pick(inst, i) {
                flips.push(i);
            }
        }
    }
}

/// [`lgch_in_place`] on a copy. `reversed` is `tour` with `[b, e]` reversed.
pub fn lgch(
    inst: &Instance,
    tour: &Tour,
    plan: &CollectionPlan,
    bpr: &BprTable,
    reversed: &Tour,
    b: usize,
    e: usize,
) -> CollectionPlan {
    debug_assert_eq!(reversed.city_at(b), tour.city_at(e));
    let mut out = plan.clone();
    let mut flips = Vec::new();
    lgch_in_place(inst, tour, bpr, &mut out, b, e, &mut flips);
    out
}
