//! Profitability trend lines and coordination after tour moves.
//!
//! For a solution, each tour position has a lowest collected IPR (`+inf`
//! when nothing is collected there) and a highest uncollected IPR (`-inf`
//! when nothing is left). Their prefix minimum and suffix maximum envelopes
//! describe where the plan tends to collect; the coordination heuristics use
//! them to repair a plan after a segment of the tour is reversed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::instance::{CityId, Instance, ItemId};
use crate::plan::CollectionPlan;
use crate::search::{kps, Clock, ItemSelector};
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordMode {
    /// Keep the plan as is.
    Noch,
    /// Bit-flip search over the reversed segment.
    Sgch,
    /// Trend-line repair.
    Pgch,
    /// Learned per-position boundary ratios.
    Lgch,
}

impl CoordMode {
    pub const ALL: [CoordMode; 4] = [CoordMode::Noch, CoordMode::Sgch, CoordMode::Pgch, CoordMode::Lgch];

    pub fn label(self) -> &'static str {
        match self {
            CoordMode::Noch => "NOCH",
            CoordMode::Sgch => "SGCH",
            CoordMode::Pgch => "PGCH",
            CoordMode::Lgch => "LGCH",
        }
    }
}

impl std::str::FromStr for CoordMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "noch" => Ok(CoordMode::Noch),
            "sgch" => Ok(CoordMode::Sgch),
            "pgch" => Ok(CoordMode::Pgch),
            "lgch" => Ok(CoordMode::Lgch),
            other => Err(format!("unknown coordination mode {other:?}")),
        }
    }
}

/// Running minimum from the front.
pub fn prefix_min(seq: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(seq.len());
    let mut cur = f64::INFINITY;
    for &s in seq {
        cur = cur.min(s);
        out.push(cur);
    }
    out
}

/// Running maximum from the back.
pub fn suffix_max(seq: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; seq.len()];
    let mut cur = f64::NEG_INFINITY;
    for (k, &s) in seq.iter().enumerate().rev() {
        cur = cur.max(s);
        out[k] = cur;
    }
    out
}

/// Per-position IPR summaries of a solution, indexed by tour position.
/// Position 0 (the start city) holds the sentinels.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendLines {
    lowest_collected: Vec<f64>,
    highest_uncollected: Vec<f64>,
    prefix_min: Vec<f64>,
    suffix_max: Vec<f64>,
}

impl TrendLines {
    pub fn build(inst: &Instance, tour: &Tour, plan: &CollectionPlan) -> Self {
        let n = tour.len();
        let mut low = vec![f64::INFINITY; n];
        let mut high = vec![f64::NEG_INFINITY; n];
        for i in 0..inst.num_items() {
            let k = tour.position_of(inst.item(i).city);
            let r = inst.ipr(i);
            if plan.is_picked(i) {
                low[k] = low[k].min(r);
            } else {
                high[k] = high[k].max(r);
            }
        }
        let mut pm = vec![f64::INFINITY; n];
        let mut sm = vec![f64::NEG_INFINITY; n];
        pm[1..].copy_from_slice(&prefix_min(&low[1..]));
        sm[1..].copy_from_slice(&suffix_max(&high[1..]));
        TrendLines {
            lowest_collected: low,
            highest_uncollected: high,
            prefix_min: pm,
            suffix_max: sm,
        }
    }

    /// Lowest collected IPR at position `k`.
    pub fn lowest_collected(&self, k: usize) -> f64 {
        self.lowest_collected[k]
    }

    /// Highest uncollected IPR at position `k`.
    pub fn highest_uncollected(&self, k: usize) -> f64 {
        self.highest_uncollected[k]
    }

    pub fn prefix_min(&self, k: usize) -> f64 {
        self.prefix_min[k]
    }

    pub fn suffix_max(&self, k: usize) -> f64 {
        self.suffix_max[k]
    }

    /// Positions `1..n` of the four sequences.
    pub fn sequences(&self) -> [&[f64]; 4] {
        [
            &self.lowest_collected[1..],
            &self.prefix_min[1..],
            &self.highest_uncollected[1..],
            &self.suffix_max[1..],
        ]
    }
}

/// City at position `k` after reversing `[b, e]` in `tour`.
#[inline]
pub(crate) fn reversed_city(tour: &Tour, b: usize, e: usize, k: usize) -> CityId {
    if k >= b && k <= e {
        tour.city_at(b + e - k)
    } else {
        tour.city_at(k)
    }
}

/// Trend-line repair of `plan` for the tour obtained by reversing `[b, e]`
/// of `tour`. `trend` describes the solution before the reversal. Changed
/// items are appended to `flips`.
///
/// Forward over the segment, collected items below the prefix minimum are
/// dropped; backward, uncollected items above the suffix maximum are
/// collected while they fit.
pub fn pgch_in_place(
    inst: &Instance,
    tour: &Tour,
    trend: &TrendLines,
    plan: &mut CollectionPlan,
    b: usize,
    e: usize,
    flips: &mut Vec<ItemId>,
) {
    for k in b..=e {
        let bound = trend.prefix_min(k);
        for &i in inst.items_at(reversed_city(tour, b, e, k)) {
            if plan.is_picked(i) && inst.ipr(i) < bound {
                plan.flip(inst, i);
                flips.push(i);
            }
        }
    }
    for k in (b..=e).rev() {
        let bound = trend.suffix_max(k);
        for &i in inst.items_at(reversed_city(tour, b, e, k)) {
            if !plan.is_picked(i) && inst.ipr(i) > bound && plan.try_pick(inst, i) {
                flips.push(i);
            }
        }
    }
}

/// Leaves the plan unchanged.
pub fn noch(plan: &CollectionPlan) -> CollectionPlan {
    plan.clone()
}

/// Profit-guided coordination. `reversed` is `tour` with `[b, e]` reversed.
pub fn pgch(
    inst: &Instance,
    tour: &Tour,
    plan: &CollectionPlan,
    trend: &TrendLines,
    reversed: &Tour,
    b: usize,
    e: usize,
) -> CollectionPlan {
    debug_assert_eq!(reversed.city_at(b), tour.city_at(e));
    let mut out = plan.clone();
    let mut flips = Vec::new();
    pgch_in_place(inst, tour, trend, &mut out, b, e, &mut flips);
    out
}

/// Search-guided coordination: bit-flip hill climbing over the items of the
/// reversed segment, evaluated on the reversed tour.
pub fn sgch<R: Rng>(
    inst: &Instance,
    plan: &CollectionPlan,
    reversed: &Tour,
    b: usize,
    e: usize,
    rng: &mut R,
    clock: &Clock,
) -> CollectionPlan {
    kps(inst, reversed, plan, b, e, ItemSelector::TourSegment, rng, clock)
}

/// Marginally collected and uncollected items of the segment `[b, e]`.
///
/// A collected item at position `k` is marginal when its IPR equals both the
/// lowest collected IPR there and the prefix minimum, and no earlier
/// position of the segment has the same lowest collected IPR. Uncollected
/// items mirror this with the highest uncollected IPR, the suffix maximum
/// and later positions. At most one of each kind is taken per city, the
/// lowest item id among ties. The result is sorted by id.
pub fn select_marginal_items(
    inst: &Instance,
    tour: &Tour,
    plan: &CollectionPlan,
    trend: &TrendLines,
    b: usize,
    e: usize,
) -> Vec<ItemId> {
    let mut out = Vec::new();
    let mut seen_min = f64::INFINITY;
    for k in b..=e {
        let low = trend.lowest_collected(k);
        if low.is_finite() && low == trend.prefix_min(k) && seen_min != low {
            if let Some(i) = lowest_id_with(inst, tour.city_at(k), |i| plan.is_picked(i) && inst.ipr(i) == low) {
                out.push(i);
            }
        }
        seen_min = seen_min.min(low);
    }
    let mut seen_max = f64::NEG_INFINITY;
    for k in (b..=e).rev() {
        let high = trend.highest_uncollected(k);
        if high.is_finite() && high == trend.suffix_max(k) && seen_max != high {
            if let Some(i) = lowest_id_with(inst, tour.city_at(k), |i| !plan.is_picked(i) && inst.ipr(i) == high) {
                out.push(i);
            }
        }
        seen_max = seen_max.max(high);
    }
    out.sort_unstable();
    out
}

fn lowest_id_with(inst: &Instance, city: CityId, pred: impl Fn(ItemId) -> bool) -> Option<ItemId> {
    inst.items_at(city).iter().copied().filter(|&i| pred(i)).min()
}
