//! Immutable problem description: cities, items, knapsack and speed model.
//!
//! Cities and items are indexed from zero internally. City `0` is the depot
//! where every tour starts and ends; it never holds items. File formats and
//! the CLI use one-based ids and translate at the boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TtpError};

/// City count below which distances are cached in a dense matrix.
pub const DEFAULT_MATRIX_THRESHOLD: usize = 2000;

pub type CityId = usize;
pub type ItemId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub profit: u64,
    pub weight: u64,
    pub city: CityId,
}

impl Item {
    /// Item profitability ratio, profit over weight.
    pub fn ipr(&self) -> f64 {
        self.profit as f64 / self.weight as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    /// Euclidean distance rounded up to the next integer.
    Ceil2d,
    /// Distances given by an explicit symmetric matrix.
    Explicit,
}

impl Metric {
    pub fn tag(self) -> &'static str {
        match self {
            Metric::Ceil2d => "CEIL_2D",
            Metric::Explicit => "EXPLICIT",
        }
    }
}

/// Raw fields of an instance before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub name: String,
    pub knapsack_data_type: String,
    pub coords: Vec<(f64, f64)>,
    /// Row-major `n * n` matrix, required when `metric` is `Explicit`.
    pub explicit_distances: Option<Vec<f64>>,
    pub items: Vec<Item>,
    pub capacity: u64,
    pub renting_rate: f64,
    pub min_speed: f64,
    pub max_speed: f64,
    pub metric: Metric,
}

#[derive(Debug, Clone)]
pub struct Instance {
    spec: InstanceSpec,
    matrix: Option<Vec<f64>>,
    ipr: Vec<f64>,
    nu: f64,
    city_start: Vec<usize>,
    city_items: Vec<ItemId>,
}

impl Instance {
    pub fn new(spec: InstanceSpec) -> Result<Self> {
        Self::with_matrix_threshold(spec, DEFAULT_MATRIX_THRESHOLD)
    }

    /// Builds the instance, caching a distance matrix when the city count is
    /// below `threshold`.
    pub fn with_matrix_threshold(spec: InstanceSpec, threshold: usize) -> Result<Self> {
        validate(&spec)?;
        let n = spec.coords.len();

        let ipr = spec.items.iter().map(Item::ipr).collect();
        let nu = (spec.max_speed - spec.min_speed) / spec.capacity as f64;

        let mut counts = vec![0usize; n + 1];
        for item in &spec.items {
            counts[item.city + 1] += 1;
        }
        for c in 0..n {
            counts[c + 1] += counts[c];
        }
        let city_start = counts;
        let mut fill = city_start.clone();
        let mut city_items = vec![0; spec.items.len()];
        for (i, item) in spec.items.iter().enumerate() {
            city_items[fill[item.city]] = i;
            fill[item.city] += 1;
        }

        let mut inst = Instance {
            spec,
            matrix: None,
            ipr,
            nu,
            city_start,
            city_items,
        };
        // Most profitable first: descending IPR, then descending profit, then id.
        for c in 0..n {
            let (lo, hi) = (inst.city_start[c], inst.city_start[c + 1]);
            let mut slice = inst.city_items[lo..hi].to_vec();
            slice.sort_by(|&a, &b| inst.compare_profitability(b, a).then(a.cmp(&b)));
            inst.city_items[lo..hi].copy_from_slice(&slice);
        }

        if inst.spec.metric == Metric::Ceil2d && n < threshold {
            let mut m = vec![0.0; n * n];
            for a in 0..n {
                for b in 0..n {
                    m[a * n + b] = inst.compute_distance(a, b);
                }
            }
            inst.matrix = Some(m);
        }
        Ok(inst)
    }

    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn num_cities(&self) -> usize {
        self.spec.coords.len()
    }

    pub fn num_items(&self) -> usize {
        self.spec.items.len()
    }

    pub fn items(&self) -> &[Item] {
        &self.spec.items
    }

    pub fn item(&self, i: ItemId) -> &Item {
        &self.spec.items[i]
    }

    pub fn ipr(&self, i: ItemId) -> f64 {
        self.ipr[i]
    }

    pub fn iprs(&self) -> &[f64] {
        &self.ipr
    }

    pub fn max_ipr(&self) -> f64 {
        self.ipr.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn capacity(&self) -> u64 {
        self.spec.capacity
    }

    pub fn renting_rate(&self) -> f64 {
        self.spec.renting_rate
    }

    pub fn min_speed(&self) -> f64 {
        self.spec.min_speed
    }

    pub fn max_speed(&self) -> f64 {
        self.spec.max_speed
    }

    pub fn metric(&self) -> Metric {
        self.spec.metric
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.spec.coords
    }

    pub fn has_matrix(&self) -> bool {
        self.matrix.is_some()
    }

    /// Items located at city `c`, most profitable first.
    pub fn items_at(&self, c: CityId) -> &[ItemId] {
        &self.city_items[self.city_start[c]..self.city_start[c + 1]]
    }

    pub fn max_items_per_city(&self) -> usize {
        (0..self.num_cities())
            .map(|c| self.items_at(c).len())
            .max()
            .unwrap_or(0)
    }

    pub fn total_item_weight(&self) -> u64 {
        self.spec.items.iter().map(|it| it.weight).sum()
    }

    /// Travelling speed carrying weight `w`, never below the minimum speed.
    #[inline]
    pub fn speed(&self, w: u64) -> f64 {
        (self.spec.max_speed - w as f64 * self.nu).max(self.spec.min_speed)
    }

    #[inline]
    pub fn distance(&self, a: CityId, b: CityId) -> f64 {
        match &self.matrix {
            Some(m) => m[a * self.num_cities() + b],
            None => self.compute_distance(a, b),
        }
    }

    fn compute_distance(&self, a: CityId, b: CityId) -> f64 {
        if a == b {
            return 0.0;
        }
        match self.spec.metric {
            Metric::Ceil2d => {
                let (xa, ya) = self.spec.coords[a];
                let (xb, yb) = self.spec.coords[b];
                ((xa - xb).hypot(ya - yb)).ceil()
            }
            Metric::Explicit => {
                let m = self.spec.explicit_distances.as_ref().expect("validated");
                m[a * self.num_cities() + b]
            }
        }
    }

    /// Orders items by profitability: higher IPR wins, equal IPR falls back to
    /// higher profit.
    pub fn compare_profitability(&self, a: ItemId, b: ItemId) -> std::cmp::Ordering {
        let (ia, ib) = (&self.spec.items[a], &self.spec.items[b]);
        let lhs = ia.profit as u128 * ib.weight as u128;
        let rhs = ib.profit as u128 * ia.weight as u128;
        lhs.cmp(&rhs).then(ia.profit.cmp(&ib.profit))
    }
}

fn validate(spec: &InstanceSpec) -> Result<()> {
    let n = spec.coords.len();
    let bad = |msg: String| Err(TtpError::Validation(msg));
    if n < 2 {
        return bad(format!("need at least 2 cities, got {n}"));
    }
    if spec.items.is_empty() {
        return bad("need at least one item".into());
    }
    if spec.capacity == 0 {
        return bad("knapsack capacity must be positive".into());
    }
    if !(spec.min_speed > 0.0 && spec.max_speed >= spec.min_speed) {
        return bad(format!(
            "speeds must satisfy max >= min > 0, got min {} max {}",
            spec.min_speed, spec.max_speed
        ));
    }
    if !(spec.renting_rate >= 0.0 && spec.renting_rate.is_finite()) {
        return bad(format!("renting rate must be non-negative, got {}", spec.renting_rate));
    }
    if spec.coords.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return bad("non-finite coordinate".into());
    }
    for (i, item) in spec.items.iter().enumerate() {
        if item.city == 0 {
            return bad(format!("item {} is assigned to the start city", i + 1));
        }
        if item.city >= n {
            return bad(format!("item {} references city {} of {n}", i + 1, item.city + 1));
        }
        if item.profit == 0 || item.weight == 0 {
            return bad(format!("item {} needs positive profit and weight", i + 1));
        }
    }
    if spec.metric == Metric::Explicit {
        let Some(m) = &spec.explicit_distances else {
            return bad("explicit metric without a distance matrix".into());
        };
        if m.len() != n * n {
            return bad(format!("distance matrix has {} entries, expected {}", m.len(), n * n));
        }
        for a in 0..n {
            if m[a * n + a] != 0.0 {
                return bad(format!("non-zero self distance at city {}", a + 1));
            }
            for b in 0..a {
                let d = m[a * n + b];
                if d != m[b * n + a] || d < 0.0 || !d.is_finite() {
                    return bad(format!("asymmetric or invalid distance between {} and {}", a + 1, b + 1));
                }
            }
        }
    }
    Ok(())
}
