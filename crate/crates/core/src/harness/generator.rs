use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::construct::{delaunay_neighbors, nearest_neighbor_tour};
use crate::error::{Result, TtpError};
use crate::eval::evaluate;
use crate::instance::{Instance, InstanceSpec, Item, ItemId, Metric};
use crate::plan::CollectionPlan;

/// How item profits relate to weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnapsackKind {
    /// Weight in `1..=1000`, profit weight plus 100.
    BoundedStronglyCorrelated,
    /// Independent profit and weight in `1..=1000`.
    Uncorrelated,
    /// Weight in `1000..=1010`, profit in `1..=1000`.
    UncorrelatedSimilarWeights,
}

impl KnapsackKind {
    pub fn label(self) -> &'static str {
        match self {
            KnapsackKind::BoundedStronglyCorrelated => "bounded strongly corr",
            KnapsackKind::Uncorrelated => "uncorrelated",
            KnapsackKind::UncorrelatedSimilarWeights => "uncorrelated, similar weights",
        }
    }

    fn draw<R: Rng>(self, rng: &mut R) -> (u64, u64) {
        match self {
            KnapsackKind::BoundedStronglyCorrelated => {
                let w = rng.gen_range(1..=1000);
                (w + 100, w)
            }
            KnapsackKind::Uncorrelated => (rng.gen_range(1..=1000), rng.gen_range(1..=1000)),
            KnapsackKind::UncorrelatedSimilarWeights => (rng.gen_range(1..=1000), rng.gen_range(1000..=1010)),
        }
    }
}

/// Parameters of a random instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub cities: usize,
    pub items_per_city: usize,
    pub kind: KnapsackKind,
    /// Capacity is `capacity_factor / 11` of the total item weight.
    pub capacity_factor: u64,
    /// Coordinates are drawn from `[0, extent)` squared.
    pub extent: u32,
    pub seed: u64,
}

impl GeneratorConfig {
    /// One item per city, correlated items, tight knapsack.
    pub fn cat_a(cities: usize, seed: u64) -> Self {
        GeneratorConfig {
            cities,
            items_per_city: 1,
            kind: KnapsackKind::BoundedStronglyCorrelated,
            capacity_factor: 1,
            extent: 1000,
            seed,
        }
    }

    /// Five items per city of similar weight, medium knapsack.
    pub fn cat_b(cities: usize, seed: u64) -> Self {
        GeneratorConfig {
            items_per_city: 5,
            kind: KnapsackKind::UncorrelatedSimilarWeights,
            capacity_factor: 5,
            ..Self::cat_a(cities, seed)
        }
    }

    /// Ten uncorrelated items per city, large knapsack.
    pub fn cat_c(cities: usize, seed: u64) -> Self {
        GeneratorConfig {
            items_per_city: 10,
            kind: KnapsackKind::Uncorrelated,
            capacity_factor: 10,
            ..Self::cat_a(cities, seed)
        }
    }
}

/// Random instance in the style of the public benchmark. The renting rate
/// is chosen so that a nearest-neighbour tour with a greedy profitability
/// packing has objective zero.
pub fn generate_instance(cfg: &GeneratorConfig) -> Result<Instance> {
    if cfg.cities < 2 || cfg.items_per_city == 0 || cfg.extent == 0 {
        return Err(TtpError::Config("generator needs at least 2 cities, 1 item per city and a positive extent".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let coords: Vec<(f64, f64)> = (0..cfg.cities)
        .map(|_| (rng.gen_range(0..cfg.extent) as f64, rng.gen_range(0..cfg.extent) as f64))
        .collect();
    let mut items = Vec::with_capacity((cfg.cities - 1) * cfg.items_per_city);
    for _ in 0..cfg.items_per_city {
        for city in 1..cfg.cities {
            let (profit, weight) = cfg.kind.draw(&mut rng);
            items.push(Item { profit, weight, city });
        }
    }
    let total: u64 = items.iter().map(|it| it.weight).sum();
    let capacity = (total * cfg.capacity_factor / 11).max(1);
    let mut spec = InstanceSpec {
        name: format!(
            "gen{}_n{}_{}_{:02}_s{}",
            cfg.cities,
            items.len(),
            short_kind(cfg.kind),
            cfg.capacity_factor,
            cfg.seed
        ),
        knapsack_data_type: cfg.kind.label().to_string(),
        coords,
        explicit_distances: None,
        items,
        capacity,
        renting_rate: 1.0,
        min_speed: 0.1,
        max_speed: 1.0,
        metric: Metric::Ceil2d,
    };
    let probe = Instance::new(spec.clone())?;
    let tour = nearest_neighbor_tour(&probe, &delaunay_neighbors(&probe), &mut rng);
    let mut order: Vec<ItemId> = (0..probe.num_items()).collect();
    order.sort_by(|&a, &b| probe.compare_profitability(b, a).then(a.cmp(&b)));
    let mut plan = CollectionPlan::empty(&probe);
    for i in order {
        plan.try_pick(&probe, i);
    }
    let state = evaluate(&probe, &tour, &plan);
    let rate = state.total_profit() as f64 / state.total_time();
    spec.renting_rate = if rate.is_finite() && rate > 0.0 { (rate * 100.0).round() / 100.0 } else { 1.0 };
    if spec.renting_rate == 0.0 {
        spec.renting_rate = 0.01;
    }
    Instance::new(spec)
}

fn short_kind(kind: KnapsackKind) -> &'static str {
    match kind {
        KnapsackKind::BoundedStronglyCorrelated => "bsc",
        KnapsackKind::Uncorrelated => "unc",
        KnapsackKind::UncorrelatedSimilarWeights => "usw",
    }
}
