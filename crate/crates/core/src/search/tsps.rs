//! Steepest-ascent 2-opt over candidate neighbours with plan coordination.

use rand::Rng;

use super::{kps_with_state, Clock, ItemSelector, SearchStats};
use crate::construct::NeighborLists;
use crate::coordination::{pgch_in_place, CoordMode, TrendLines};
use crate::eval::{evaluate, improves};
use crate::instance::{Instance, ItemId};
use crate::learning::{lgch_in_place, BprTable};
use crate::plan::CollectionPlan;
use crate::tour::Tour;

/// A coordination heuristic together with the data it needs.
#[derive(Debug, Clone, Copy)]
pub enum Coordination<'a> {
    Noch,
    Sgch,
    Pgch,
    Lgch(&'a BprTable),
}

impl Coordination<'_> {
    pub fn mode(&self) -> CoordMode {
        match self {
            Coordination::Noch => CoordMode::Noch,
            Coordination::Sgch => CoordMode::Sgch,
            Coordination::Pgch => CoordMode::Pgch,
            Coordination::Lgch(_) => CoordMode::Lgch,
        }
    }
}

enum Change {
    Flips(Vec<ItemId>),
    Plan(CollectionPlan),
}

/// Whether a pass that moved the objective from `before` to `after` gained
/// at least `alpha` percent of `max(|before|, 1)`.
pub fn continue_passes(before: f64, after: f64, alpha: f64) -> bool {
    after >= before + alpha / 100.0 * before.abs().max(1.0)
}

/// Repeated passes over all 2-opt moves `(b, e)` with `1 <= b <= n - 2`,
/// `city_at(e)` a neighbour of `city_at(b)` and `b < e < n`. Each move is
/// judged together with the plan the coordination heuristic produces for
/// it; the best strictly improving move of a pass is applied at its end.
/// Passes continue while they gain at least `alpha` percent. The clock is
/// polled once per move. Returns the number of applied moves.
#[allow(clippy::too_many_arguments)]
pub fn tsps<R: Rng>(
    inst: &Instance,
    tour: &mut Tour,
    plan: &mut CollectionPlan,
    coord: Coordination<'_>,
    neighbors: &NeighborLists,
    alpha: f64,
    rng: &mut R,
    clock: &Clock,
    stats: &mut SearchStats,
) -> usize {
    let n = tour.len();
    let mut applied = 0;
    if n < 3 {
        return 0;
    }
    let mut work = plan.clone();
    let mut reversed = tour.clone();
    let mut flips = Vec::new();
    loop {
        let state = evaluate(inst, tour, plan);
        let start = state.objective();
        let trend = matches!(coord, Coordination::Pgch).then(|| TrendLines::build(inst, tour, plan));
        let mut best: Option<(f64, usize, usize, Change)> = None;
        let mut timed_out = false;
        'moves: for b in 1..=n - 2 {
            for &c in neighbors.of(tour.city_at(b)) {
                let e = tour.position_of(c);
                if e <= b || e >= n {
                    continue;
                }
                if clock.tick() {
                    timed_out = true;
                    break 'moves;
                }
                let incumbent = best.as_ref().map_or(start, |m| m.0);
                match coord {
                    Coordination::Noch => {
                        let obj = state.two_opt_objective(inst, tour, plan, b, e);
                        if improves(obj, incumbent) {
                            best = Some((obj, b, e, Change::Flips(Vec::new())));
                        }
                    }
                    Coordination::Pgch | Coordination::Lgch(_) => {
                        flips.clear();
                        match coord {
                            Coordination::Lgch(bpr) => lgch_in_place(inst, tour, bpr, &mut work, b, e, &mut flips),
                            _ => pgch_in_place(inst, tour, trend.as_ref().expect("built"), &mut work, b, e, &mut flips),
                        }
                        let obj = state.two_opt_objective(inst, tour, &work, b, e);
                        for &i in flips.iter().rev() {
                            work.flip(inst, i);
                        }
                        if improves(obj, incumbent) {
                            best = Some((obj, b, e, Change::Flips(flips.clone())));
                        }
                    }
                    Coordination::Sgch => {
                        reversed.two_opt(b, e).expect("valid segment");
                        let mut st = state.clone();
                        st.reeval_after_two_opt(inst, &reversed, plan, b, e).expect("valid segment");
                        let mut candidate = plan.clone();
                        kps_with_state(inst, &reversed, &mut candidate, &mut st, b, e, ItemSelector::TourSegment, rng, clock);
                        reversed.two_opt(b, e).expect("valid segment");
                        if improves(st.objective(), incumbent) {
                            best = Some((st.objective(), b, e, Change::Plan(candidate)));
                        }
                    }
                }
            }
        }
        let Some((_, b, e, change)) = best else { break };
        tour.two_opt(b, e).expect("valid segment");
        reversed.two_opt(b, e).expect("valid segment");
        match change {
            Change::Flips(f) => {
                for i in f {
                    plan.flip(inst, i);
                    work.flip(inst, i);
                }
            }
            Change::Plan(p) => {
                work.clone_from(&p);
                *plan = p;
            }
        }
        applied += 1;
        stats.record_two_opt(b, e, n);
        let after = evaluate(inst, tour, plan).objective();
        if timed_out || !continue_passes(start, after, alpha) {
            break;
        }
    }
    applied
}
