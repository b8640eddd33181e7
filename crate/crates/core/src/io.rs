//! Benchmark instance files and solution records.
//!
//! Instance files follow the public TTP benchmark layout: a `KEY: value`
//! header, a `NODE_COORD_SECTION` with `index x y` lines and an
//! `ITEMS SECTION` with `index profit weight node` lines. Header order and
//! whitespace are free. An optional `EDGE_WEIGHT_SECTION` with `n` rows of
//! `n` reals supplies distances when `EDGE_WEIGHT_TYPE` is `EXPLICIT`.

use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TtpError};
use crate::eval::{approx_eq, evaluate};
use crate::instance::{CityId, Instance, InstanceSpec, Item, ItemId, Metric};
use crate::plan::CollectionPlan;
use crate::tour::Tour;

/// Header fields of a benchmark file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceHeader {
    pub name: String,
    pub knapsack_data_type: String,
    pub dimension: usize,
    pub item_count: usize,
    pub capacity: u64,
    pub min_speed: f64,
    pub max_speed: f64,
    pub renting_ratio: f64,
    pub edge_weight_type: Metric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    /// One item per city.
    CatA,
    /// Five items per city.
    CatB,
    /// Ten items per city.
    CatC,
    Other,
}

impl Category {
    /// Classifies by parsed content: every non-start city must hold the same
    /// number of items.
    pub fn classify(inst: &Instance) -> Category {
        let per_city: Vec<usize> = (1..inst.num_cities()).map(|c| inst.items_at(c).len()).collect();
        let first = per_city[0];
        if per_city.iter().any(|&k| k != first) {
            return Category::Other;
        }
        match first {
            1 => Category::CatA,
            5 => Category::CatB,
            10 => Category::CatC,
            _ => Category::Other,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Category::CatA => "CatA",
            Category::CatB => "CatB",
            Category::CatC => "CatC",
            Category::Other => "Other",
        }
    }
}

#[derive(Default)]
struct HeaderFields {
    name: Option<String>,
    data_type: Option<String>,
    dimension: Option<usize>,
    items: Option<usize>,
    capacity: Option<u64>,
    min_speed: Option<f64>,
    max_speed: Option<f64>,
    renting: Option<f64>,
    metric: Option<Metric>,
}

impl HeaderFields {
    fn finish(self) -> Result<InstanceHeader> {
        fn req<T>(v: Option<T>, key: &str) -> Result<T> {
            v.ok_or_else(|| TtpError::Validation(format!("missing header field {key}")))
        }
        let header = InstanceHeader {
            name: self.name.unwrap_or_default(),
            knapsack_data_type: self.data_type.unwrap_or_default(),
            dimension: req(self.dimension, "DIMENSION")?,
            item_count: req(self.items, "NUMBER OF ITEMS")?,
            capacity: req(self.capacity, "CAPACITY OF KNAPSACK")?,
            min_speed: req(self.min_speed, "MIN SPEED")?,
            max_speed: req(self.max_speed, "MAX SPEED")?,
            renting_ratio: req(self.renting, "RENTING RATIO")?,
            edge_weight_type: self.metric.unwrap_or(Metric::Ceil2d),
        };
        if header.dimension < 2 {
            return Err(TtpError::Validation("DIMENSION must be at least 2".into()));
        }
        if header.item_count < 1 {
            return Err(TtpError::Validation("NUMBER OF ITEMS must be at least 1".into()));
        }
        Ok(header)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Coords,
    Items,
    Weights,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| TtpError::parse(line, format!("cannot parse {what} from {tok:?}")))
}

/// Integral quantity, tolerating a trailing `.0`.
fn parse_int(tok: &str, line: usize, what: &str) -> Result<u64> {
    if let Ok(v) = tok.parse::<u64>() {
        return Ok(v);
    }
    match tok.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(TtpError::parse(line, format!("cannot parse integer {what} from {tok:?}"))),
    }
}

fn normalize_key(key: &str) -> String {
    key.split_whitespace().collect::<Vec<_>>().join(" ").to_ascii_uppercase()
}

/// Parses a benchmark instance and validates it.
pub fn parse_instance<R: BufRead>(source: R) -> Result<Instance> {
    let (header, spec) = parse_instance_spec(source)?;
    log::debug!(
        "parsed {} with {} cities and {} items",
        header.name,
        header.dimension,
        header.item_count
    );
    Instance::new(spec)
}

pub fn parse_instance_str(text: &str) -> Result<Instance> {
    parse_instance(text.as_bytes())
}

pub fn read_instance_file(path: &std::path::Path) -> Result<Instance> {
    let file = std::fs::File::open(path)?;
    parse_instance(std::io::BufReader::new(file))
}

/// Parses the header and sections without building the instance.
pub fn parse_instance_spec<R: BufRead>(source: R) -> Result<(InstanceHeader, InstanceSpec)> {
    let mut fields = HeaderFields::default();
    let mut header: Option<InstanceHeader> = None;
    let mut section = Section::Header;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut items: Vec<Option<Item>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed == "EOF" {
            continue;
        }

        let upper = trimmed.to_ascii_uppercase();
        let next = if upper.starts_with("NODE_COORD_SECTION") {
            Some(Section::Coords)
        } else if upper.starts_with("ITEMS SECTION") {
            Some(Section::Items)
        } else if upper.starts_with("EDGE_WEIGHT_SECTION") {
            Some(Section::Weights)
        } else {
            None
        };
        if let Some(next) = next {
            if header.is_none() {
                let h = std::mem::take(&mut fields).finish()?;
                coords = vec![None; h.dimension];
                items = vec![None; h.item_count];
                header = Some(h);
            }
            section = next;
            continue;
        }

        match section {
            Section::Header => {
                let Some((key, value)) = trimmed.split_once(':') else {
                    return Err(TtpError::parse(lineno, format!("expected KEY: value, got {trimmed:?}")));
                };
                let value = value.trim();
                match normalize_key(key).as_str() {
                    "PROBLEM NAME" | "NAME" => fields.name = Some(value.to_string()),
                    "KNAPSACK DATA TYPE" => fields.data_type = Some(value.to_string()),
                    "DIMENSION" => fields.dimension = Some(parse_int(value, lineno, "DIMENSION")? as usize),
                    "NUMBER OF ITEMS" => fields.items = Some(parse_int(value, lineno, "NUMBER OF ITEMS")? as usize),
                    "CAPACITY OF KNAPSACK" => fields.capacity = Some(parse_int(value, lineno, "capacity")?),
                    "MIN SPEED" => fields.min_speed = Some(parse_num(value, lineno, "MIN SPEED")?),
                    "MAX SPEED" => fields.max_speed = Some(parse_num(value, lineno, "MAX SPEED")?),
                    "RENTING RATIO" => fields.renting = Some(parse_num(value, lineno, "RENTING RATIO")?),
                    "EDGE_WEIGHT_TYPE" | "EDGE WEIGHT TYPE" => {
                        fields.metric = Some(match value {
                            "CEIL_2D" => Metric::Ceil2d,
                            "EXPLICIT" => Metric::Explicit,
                            other => {
                                return Err(TtpError::parse(lineno, format!("unsupported EDGE_WEIGHT_TYPE {other}")))
                            }
                        })
                    }
                    other => log::debug!("line {lineno}: ignoring header field {other}"),
                }
            }
            Section::Coords => {
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                if toks.len() < 3 {
                    return Err(TtpError::parse(lineno, "coordinate line needs index x y"));
                }
                let idx = parse_int(toks[0], lineno, "node index")? as usize;
                if idx == 0 || idx > coords.len() {
                    return Err(TtpError::parse(lineno, format!("node index {idx} out of range")));
                }
                let x = parse_num(toks[1], lineno, "x")?;
                let y = parse_num(toks[2], lineno, "y")?;
                coords[idx - 1] = Some((x, y));
            }
            Section::Items => {
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                if toks.len() < 4 {
                    return Err(TtpError::parse(lineno, "item line needs index profit weight node"));
                }
                let idx = parse_int(toks[0], lineno, "item index")? as usize;
                if idx == 0 || idx > items.len() {
                    return Err(TtpError::parse(lineno, format!("item index {idx} out of range")));
                }
                let profit = parse_int(toks[1], lineno, "profit")?;
                let weight = parse_int(toks[2], lineno, "weight")?;
                let node = parse_int(toks[3], lineno, "node")? as usize;
                let n = coords.len();
                if node == 0 || node > n {
                    return Err(TtpError::Validation(format!(
                        "item {idx} references node {node}, outside 1..={n}"
                    )));
                }
                if node == 1 {
                    return Err(TtpError::Validation(format!("item {idx} is located at the start city")));
                }
                items[idx - 1] = Some(Item { profit, weight, city: node - 1 });
            }
            Section::Weights => {
                for tok in trimmed.split_whitespace() {
                    weights.push(parse_num(tok, lineno, "distance")?);
                }
            }
        }
    }

    let header = match header {
        Some(h) => h,
        None => return Err(TtpError::Validation("no NODE_COORD_SECTION found".into())),
    };
    let coords = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| TtpError::Validation(format!("missing coordinates for node {}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let items = items
        .into_iter()
        .enumerate()
        .map(|(i, it)| it.ok_or_else(|| TtpError::Validation(format!("missing item {}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let explicit_distances = match header.edge_weight_type {
        Metric::Explicit => Some(weights),
        Metric::Ceil2d => None,
    };
    let spec = InstanceSpec {
        name: header.name.clone(),
        knapsack_data_type: header.knapsack_data_type.clone(),
        coords,
        explicit_distances,
        items,
        capacity: header.capacity,
        renting_rate: header.renting_ratio,
        min_speed: header.min_speed,
        max_speed: header.max_speed,
        metric: header.edge_weight_type,
    };
    Ok((header, spec))
}

/// Serializes an instance in the benchmark layout.
pub fn write_instance(inst: &Instance) -> String {
    let spec = inst.spec();
    let mut out = String::new();
    let _ = writeln!(out, "PROBLEM NAME:\t{}", spec.name);
    let _ = writeln!(out, "KNAPSACK DATA TYPE:\t{}", spec.knapsack_data_type);
    let _ = writeln!(out, "DIMENSION:\t{}", inst.num_cities());
    let _ = writeln!(out, "NUMBER OF ITEMS:\t{}", inst.num_items());
    let _ = writeln!(out, "CAPACITY OF KNAPSACK:\t{}", spec.capacity);
    let _ = writeln!(out, "MIN SPEED:\t{}", spec.min_speed);
    let _ = writeln!(out, "MAX SPEED:\t{}", spec.max_speed);
    let _ = writeln!(out, "RENTING RATIO:\t{}", spec.renting_rate);
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE:\t{}", spec.metric.tag());
    if let Some(m) = &spec.explicit_distances {
        let n = inst.num_cities();
        let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
        for row in m.chunks(n) {
            let line: Vec<String> = row.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    let _ = writeln!(out, "NODE_COORD_SECTION\t(INDEX, X, Y):");
    for (i, (x, y)) in spec.coords.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}\t{}", i + 1, x, y);
    }
    let _ = writeln!(out, "ITEMS SECTION\t(INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):");
    for (i, it) in spec.items.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}\t{}\t{}", i + 1, it.profit, it.weight, it.city + 1);
    }
    out
}

/// A solution as stored on disk. Ids are zero-based in memory and one-based
/// in the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    /// Closed tour, starting and ending at city 0.
    pub tour: Vec<CityId>,
    /// Collected items in increasing id order.
    pub picked_items: Vec<ItemId>,
    pub objective: f64,
    pub elapsed_ms: u64,
    pub seed: u64,
}

impl SolutionRecord {
    pub fn new(inst: &Instance, tour: &Tour, plan: &CollectionPlan, elapsed_ms: u64, seed: u64) -> Self {
        SolutionRecord {
            tour: tour.order().to_vec(),
            picked_items: plan.picked_items(),
            objective: evaluate(inst, tour, plan).objective(),
            elapsed_ms,
            seed,
        }
    }

    /// Rebuilds and validates the tour and plan against `inst`.
    pub fn to_solution(&self, inst: &Instance) -> Result<(Tour, CollectionPlan)> {
        if self.tour.len() != inst.num_cities() + 1 {
            return Err(TtpError::InvalidSolution(format!(
                "tour visits {} positions, instance has {} cities",
                self.tour.len().saturating_sub(1),
                inst.num_cities()
            )));
        }
        let tour = Tour::from_closed(&self.tour)?;
        let plan = CollectionPlan::from_items(inst, &self.picked_items)?;
        if !plan.is_feasible(inst) {
            return Err(TtpError::InvalidSolution(format!(
                "collected weight {} exceeds capacity {}",
                plan.total_weight(),
                inst.capacity()
            )));
        }
        Ok((tour, plan))
    }
}

/// Writes a solution record. Infeasible or malformed solutions are refused.
pub fn write_solution(inst: &Instance, record: &SolutionRecord) -> Result<String> {
    record.to_solution(inst)?;
    let tour: Vec<String> = record.tour.iter().map(|c| (c + 1).to_string()).collect();
    let items: Vec<String> = record.picked_items.iter().map(|i| (i + 1).to_string()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{}", tour.join(" "));
    let _ = writeln!(out, "{}", items.join(" "));
    let _ = writeln!(out, "objective {}", record.objective);
    let _ = writeln!(out, "elapsed_ms {}", record.elapsed_ms);
    let _ = writeln!(out, "seed {}", record.seed);
    Ok(out)
}

/// A parsed solution together with any consistency warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadSolution {
    pub record: SolutionRecord,
    pub recomputed_objective: f64,
    pub warnings: Vec<String>,
}

/// Reads a solution record, validates it against `inst` and re-evaluates
/// the stored objective.
pub fn read_solution(inst: &Instance, text: &str) -> Result<ReadSolution> {
    let mut lines = text.lines().enumerate();
    let parse_ids = |lineno: usize, line: &str, what: &str| -> Result<Vec<usize>> {
        line.split_whitespace()
            .map(|tok| {
                let id: usize = parse_num(tok, lineno, what)?;
                if id == 0 {
                    return Err(TtpError::parse(lineno, format!("{what} ids are one-based")));
                }
                Ok(id - 1)
            })
            .collect()
    };
    let (i, tour_line) = lines.next().ok_or_else(|| TtpError::parse(1, "missing tour line"))?;
    let tour = parse_ids(i + 1, tour_line, "city")?;
    let (i, items_line) = lines.next().ok_or_else(|| TtpError::parse(2, "missing item line"))?;
    let mut picked_items = parse_ids(i + 1, items_line, "item")?;
    picked_items.sort_unstable();

    let mut objective = None;
    let mut elapsed_ms = 0;
    let mut seed = 0;
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(char::is_whitespace) else {
            return Err(TtpError::parse(lineno, format!("expected `key value`, got {line:?}")));
        };
        let value = value.trim();
        match key {
            "objective" => objective = Some(parse_num::<f64>(value, lineno, "objective")?),
            "elapsed_ms" => elapsed_ms = parse_num(value, lineno, "elapsed_ms")?,
            "seed" => seed = parse_num(value, lineno, "seed")?,
            other => return Err(TtpError::parse(lineno, format!("unknown field {other}"))),
        }
    }
    let objective = objective.ok_or_else(|| TtpError::parse(3, "missing objective"))?;
    let record = SolutionRecord {
        tour,
        picked_items,
        objective,
        elapsed_ms,
        seed,
    };
    let (t, p) = record.to_solution(inst)?;
    let recomputed = evaluate(inst, &t, &p).objective();
    let mut warnings = Vec::new();
    if !approx_eq(objective, recomputed, 1e-6) {
        let msg = format!("stored objective {objective} differs from recomputed {recomputed}");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(ReadSolution {
        record,
        recomputed_objective: recomputed,
        warnings,
    })
}
