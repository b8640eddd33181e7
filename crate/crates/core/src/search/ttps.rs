//! The restart driver.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{kps_sas, kps_with_state, tsps, Clock, ClockKind, Coordination, ItemSelector};
use crate::construct::{build_tour, delaunay_neighbors, init_collection_plan, NeighborLists, DEFAULT_CHAINS};
use crate::coordination::CoordMode;
use crate::error::{Result, TtpError};
use crate::eval::{evaluate, improves};
use crate::instance::Instance;
use crate::learning::{compute_bprs, construction_cost, generate_training_set, hidden_width, train, BprTable, TrainConfig};
use crate::plan::CollectionPlan;
use crate::tour::Tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KpsMode {
    /// Bit flips over every item of the range.
    Sbfs,
    /// Bit flips over marginal items only.
    Mbfs,
    /// Simulated annealing baseline.
    Sas,
}

impl KpsMode {
    pub fn label(self) -> &'static str {
        match self {
            KpsMode::Sbfs => "SBFS",
            KpsMode::Mbfs => "MBFS",
            KpsMode::Sas => "SAS",
        }
    }
}

impl std::str::FromStr for KpsMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sbfs" => Ok(KpsMode::Sbfs),
            "mbfs" => Ok(KpsMode::Mbfs),
            "sas" => Ok(KpsMode::Sas),
            other => Err(format!("unknown packing search {other:?}")),
        }
    }
}

/// Settings of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub coord: CoordMode,
    pub kps: KpsMode,
    /// Minimum pass-over-pass gain of the tour search, in percent.
    pub alpha: f64,
    pub timeout_ms: u64,
    pub seed: u64,
    /// Perturbation rounds when building each initial tour.
    pub chains: usize,
    pub clock: ClockKind,
    pub train: TrainConfig,
}

impl SearchConfig {
    pub fn new(coord: CoordMode, kps: KpsMode, timeout_ms: u64, seed: u64) -> Self {
        SearchConfig {
            coord,
            kps,
            alpha: 0.01,
            timeout_ms,
            seed,
            chains: DEFAULT_CHAINS,
            clock: ClockKind::Wall,
            train: TrainConfig::default(),
        }
    }

    /// Name such as `PGCH+MBFS`.
    pub fn version(&self) -> String {
        format!("{}+{}", self.coord.label(), self.kps.label())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) {
            return Err(TtpError::Config(format!("alpha must be non-negative, got {}", self.alpha)));
        }
        if self.timeout_ms == 0 {
            return Err(TtpError::Config("timeout must be positive".into()));
        }
        Ok(())
    }
}

/// Best objective known at a point of the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimelinePoint {
    pub elapsed_ms: u64,
    pub objective: f64,
}

/// What the classifier training of a run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub train_examples: usize,
    pub validation_examples: usize,
    pub validation_correct: usize,
    pub selected_model: usize,
}

/// Counters and averages collected during a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub restarts: u64,
    pub accepted_two_opt: u64,
    seg_len_pct_sum: f64,
    g_tsp_sum: f64,
    g_tsp_count: u64,
    g_kp_sum: f64,
    g_kp_count: u64,
    pub laps: u64,
    /// Improvements of the best objective, in order.
    pub timeline: Vec<TimelinePoint>,
    pub training: Option<TrainingSummary>,
    pub elapsed_ms: u64,
}

impl SearchStats {
    pub(crate) fn record_two_opt(&mut self, b: usize, e: usize, n: usize) {
        self.accepted_two_opt += 1;
        self.seg_len_pct_sum += (e - b + 1) as f64 / n as f64 * 100.0;
    }

    fn record_lap(&mut self, n_bs: f64, n_tsp: f64, n_kp: f64) {
        self.laps += 1;
        if n_bs != 0.0 {
            self.g_tsp_sum += (n_tsp - n_bs) / n_bs.abs() * 100.0;
            self.g_tsp_count += 1;
        }
        if n_tsp != 0.0 {
            self.g_kp_sum += (n_kp - n_tsp) / n_tsp.abs() * 100.0;
            self.g_kp_count += 1;
        }
    }

    /// Mean length of applied 2-opt segments as a percentage of the tour.
    pub fn mean_seg_len_pct(&self) -> f64 {
        mean(self.seg_len_pct_sum, self.accepted_two_opt)
    }

    /// Mean relative objective gain of the tour phase per lap, in percent.
    pub fn mean_g_tsp(&self) -> f64 {
        mean(self.g_tsp_sum, self.g_tsp_count)
    }

    /// Mean relative objective gain of the packing phase per lap, in percent.
    pub fn mean_g_kp(&self) -> f64 {
        mean(self.g_kp_sum, self.g_kp_count)
    }

    /// Best objective at the end of each whole second `0..=secs`; `None`
    /// before the first solution.
    pub fn per_second(&self, secs: u64) -> Vec<Option<f64>> {
        let mut out = Vec::with_capacity(secs as usize + 1);
        let mut it = self.timeline.iter().peekable();
        let mut cur = None;
        for s in 0..=secs {
            while let Some(p) = it.peek() {
                if p.elapsed_ms <= s * 1000 {
                    cur = Some(p.objective);
                    it.next();
                } else {
                    break;
                }
            }
            out.push(cur);
        }
        out
    }
}

fn mean(sum: f64, count: u64) -> f64 {
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// A feasible solution with its objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub tour: Tour,
    pub plan: CollectionPlan,
    pub objective: f64,
}

struct Tracker<'a> {
    best: Option<Solution>,
    stats: SearchStats,
    clock: &'a Clock,
}

impl Tracker<'_> {
    fn offer(&mut self, inst: &Instance, tour: &Tour, plan: &CollectionPlan) {
        debug_assert!(plan.is_feasible(inst));
        let obj = evaluate(inst, tour, plan).objective();
        if self.best.as_ref().map_or(true, |b| improves(obj, b.objective)) {
            self.best = Some(Solution { tour: tour.clone(), plan: plan.clone(), objective: obj });
            self.stats.timeline.push(TimelinePoint { elapsed_ms: self.clock.elapsed_ms(), objective: obj });
        }
    }
}

/// Trains the classifier for learning-guided coordination and distils its
/// table. Sampled solutions are offered to the tracker.
fn prepare_lgch<R: Rng>(
    inst: &Instance,
    neighbors: &NeighborLists,
    cfg: &SearchConfig,
    rng: &mut R,
    tracker: &mut Tracker<'_>,
) -> Result<BprTable> {
    let clock = tracker.clock;
    let set = generate_training_set(inst, neighbors, rng, cfg.chains, clock, |t, p| tracker.offer(inst, t, p))?;
    let deadline = match (clock.kind(), clock.remaining_ms()) {
        (ClockKind::Wall, Some(ms)) => Some(Instant::now() + Duration::from_millis(ms)),
        _ => None,
    };
    let out = train(&set, hidden_width(inst.num_items()), &cfg.train, rng.gen(), deadline)?;
    clock.charge(out.example_passes / 50);
    tracker.stats.training = Some(TrainingSummary {
        train_examples: set.train.len(),
        validation_examples: set.validation.len(),
        validation_correct: out.validation_correct,
        selected_model: out.selected,
    });
    Ok(compute_bprs(inst, &out.model))
}

/// Restarted local search: each restart builds a tour and a plan, then
/// alternates tour search and packing search over the whole tour until a
/// lap changes nothing. Runs until the clock is spent, but always finishes
/// at least one construction. Returns the best solution seen.
pub fn ttps(inst: &Instance, cfg: &SearchConfig) -> Result<(Solution, SearchStats)> {
    cfg.validate()?;
    let clock = Clock::new(cfg.clock, cfg.timeout_ms);
    let neighbors = delaunay_neighbors(inst);
    ttps_with(inst, cfg, &neighbors, &clock)
}

/// [`ttps`] with caller-provided neighbour lists and clock.
pub fn ttps_with(
    inst: &Instance,
    cfg: &SearchConfig,
    neighbors: &NeighborLists,
    clock: &Clock,
) -> Result<(Solution, SearchStats)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = inst.num_cities();
    let mut tracker = Tracker { best: None, stats: SearchStats::default(), clock };

    let bpr = if cfg.coord == CoordMode::Lgch {
        match prepare_lgch(inst, neighbors, cfg, &mut rng, &mut tracker) {
            Ok(t) => Some(t),
            Err(e) => {
                log::warn!("classifier unavailable, continuing without coordination: {e}");
                None
            }
        }
    } else {
        None
    };
    let coord = match (cfg.coord, &bpr) {
        (CoordMode::Noch, _) | (CoordMode::Lgch, None) => Coordination::Noch,
        (CoordMode::Sgch, _) => Coordination::Sgch,
        (CoordMode::Pgch, _) => Coordination::Pgch,
        (CoordMode::Lgch, Some(t)) => Coordination::Lgch(t),
    };

    loop {
        if tracker.best.is_some() && clock.expired() {
            break;
        }
        let mut tour = build_tour(inst, neighbors, &mut rng, cfg.chains);
        let mut plan = init_collection_plan(inst, &tour);
        clock.charge(construction_cost(inst, cfg.chains));
        tracker.stats.restarts += 1;
        tracker.offer(inst, &tour, &plan);

        while !clock.expired() {
            let n_bs = evaluate(inst, &tour, &plan).objective();
            let mut stats = std::mem::take(&mut tracker.stats);
            tsps(inst, &mut tour, &mut plan, coord, neighbors, cfg.alpha, &mut rng, clock, &mut stats);
            tracker.stats = stats;
            let mut state = evaluate(inst, &tour, &plan);
            let n_tsp = state.objective();
            tracker.offer(inst, &tour, &plan);
            match cfg.kps {
                KpsMode::Sbfs | KpsMode::Mbfs => {
                    let selector = if cfg.kps == KpsMode::Sbfs { ItemSelector::TourSegment } else { ItemSelector::Marginal };
                    kps_with_state(inst, &tour, &mut plan, &mut state, 1, n - 1, selector, &mut rng, clock);
                }
                KpsMode::Sas => {
                    plan = kps_sas(inst, &tour, &plan, &mut rng, clock);
                    state = evaluate(inst, &tour, &plan);
                }
            }
            let n_kp = state.objective();
            tracker.stats.record_lap(n_bs, n_tsp, n_kp);
            tracker.offer(inst, &tour, &plan);
            if n_kp <= n_bs {
                break;
            }
        }
    }
    tracker.stats.elapsed_ms = clock.elapsed_ms();
    let best = tracker.best.expect("at least one construction");
    Ok((best, tracker.stats))
}
