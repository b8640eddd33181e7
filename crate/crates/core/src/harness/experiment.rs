use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compute_rdi, Summary};
use crate::coordination::CoordMode;
use crate::error::{Result, TtpError};
use crate::eval::approx_eq;
use crate::instance::Instance;
use crate::io::{read_instance_file, read_solution, write_solution, Category, SolutionRecord};
use crate::search::{ttps, ClockKind, KpsMode, SearchConfig};

/// A solver version: coordination heuristic plus packing search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Version {
    pub coord: CoordMode,
    pub kps: KpsMode,
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.coord.label(), self.kps.label())
    }
}

impl FromStr for Version {
    type Err = TtpError;
    fn from_str(s: &str) -> Result<Self> {
        let (c, k) = s
            .split_once('+')
            .ok_or_else(|| TtpError::Config(format!("version {s:?} is not of the form COORD+KPS")))?;
        Ok(Version {
            coord: c.trim().parse().map_err(TtpError::Config)?,
            kps: k.trim().parse().map_err(TtpError::Config)?,
        })
    }
}

impl Serialize for Version {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Version {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An instance to run, or the reason it could not be loaded.
#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub label: String,
    pub instance: std::result::Result<Arc<Instance>, String>,
}

impl NamedInstance {
    pub fn loaded(inst: Instance) -> Self {
        NamedInstance { label: inst.name().to_string(), instance: Ok(Arc::new(inst)) }
    }
}

/// Everything an experiment needs besides the instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSettings {
    pub versions: Vec<Version>,
    pub runs: usize,
    pub timeout_ms: u64,
    pub base_seed: u64,
    pub workers: usize,
    pub clock: ClockKind,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        ExperimentSettings {
            versions: vec![
                Version { coord: CoordMode::Noch, kps: KpsMode::Sbfs },
                Version { coord: CoordMode::Pgch, kps: KpsMode::Mbfs },
            ],
            runs: 3,
            timeout_ms: 10_000,
            base_seed: 0,
            workers: 1,
            clock: ClockKind::Wall,
        }
    }
}

/// Experiment description as read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    /// Instance files or directories of `.ttp` files.
    pub instances: Vec<PathBuf>,
    pub versions: Option<Vec<Version>>,
    pub runs: Option<usize>,
    pub timeout_ms: Option<u64>,
    pub base_seed: Option<u64>,
    pub workers: Option<usize>,
    pub clock: Option<ClockKind>,
    pub out: Option<PathBuf>,
}

impl ExperimentFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| TtpError::Config(e.to_string()))
    }

    /// Settings with defaults for missing keys.
    pub fn settings(&self) -> ExperimentSettings {
        let d = ExperimentSettings::default();
        ExperimentSettings {
            versions: self.versions.clone().unwrap_or(d.versions),
            runs: self.runs.unwrap_or(d.runs),
            timeout_ms: self.timeout_ms.unwrap_or(d.timeout_ms),
            base_seed: self.base_seed.unwrap_or(d.base_seed),
            workers: self.workers.unwrap_or(d.workers),
            clock: self.clock.unwrap_or(d.clock),
        }
    }
}

/// Expands directories to their `.ttp` files in name order and loads every
/// file. Unreadable files become entries carrying the error.
pub fn load_instances(paths: &[PathBuf]) -> Vec<NamedInstance> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            match std::fs::read_dir(p) {
                Ok(rd) => {
                    let mut found: Vec<PathBuf> = rd
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|f| f.extension().is_some_and(|x| x == "ttp"))
                        .collect();
                    found.sort();
                    files.extend(found);
                }
                Err(_) => files.push(p.clone()),
            }
        } else {
            files.push(p.clone());
        }
    }
    files.iter().map(|f| load_one(f)).collect()
}

fn load_one(path: &Path) -> NamedInstance {
    let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    NamedInstance {
        label,
        instance: read_instance_file(path).map(Arc::new).map_err(|e| format!("{}: {e}", path.display())),
    }
}

/// One line of the results table. Column order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub instance: String,
    pub category: String,
    pub version: String,
    pub run: usize,
    pub seed: u64,
    pub objective: Option<f64>,
    pub restarts: Option<u64>,
    pub accepted_2opt: Option<u64>,
    pub mean_seg_len_pct: Option<f64>,
    pub g_tsp: Option<f64>,
    pub g_kp: Option<f64>,
    pub elapsed_ms: Option<u64>,
}

/// A run with its timeline and any error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub row: RunRow,
    pub error: Option<String>,
    /// Best objective at each whole second of the run.
    pub timeline: Vec<Option<f64>>,
}

/// Aggregates for one instance and version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VersionSummary {
    pub instance: String,
    pub version: String,
    pub runs_ok: usize,
    pub objective: Option<Summary>,
    pub rdi: Option<f64>,
    pub rdi_degenerate: bool,
    pub mean_restarts: f64,
    pub mean_g_tsp: f64,
    pub mean_g_kp: f64,
    pub mean_seg_len_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub build: String,
    pub settings: ExperimentSettings,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub provenance: Provenance,
    pub runs: Vec<RunResult>,
    pub summaries: Vec<VersionSummary>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.runs {
            w.serialize(&r.row).map_err(|e| TtpError::Config(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| TtpError::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| TtpError::Config(e.to_string()))
    }

    /// Writes `results.csv` and `report.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("results.csv"), self.to_csv()?)?;
        std::fs::write(dir.join("report.json"), self.to_json()?)?;
        Ok(())
    }

    pub fn summary(&self, instance: &str, version: &str) -> Option<&VersionSummary> {
        self.summaries.iter().find(|s| s.instance == instance && s.version == version)
    }
}

/// Build identifier recorded in reports.
pub fn build_id() -> String {
    match option_env!("TTP_BUILD_ID") {
        Some(id) => format!("{}-{} ({id})", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        None => format!("{}-{}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
    }
}

fn run_one(named: &NamedInstance, version: Version, run: usize, settings: &ExperimentSettings) -> RunResult {
    let seed = settings.base_seed + run as u64;
    let mut row = RunRow {
        instance: named.label.clone(),
        category: String::new(),
        version: version.to_string(),
        run,
        seed,
        objective: None,
        restarts: None,
        accepted_2opt: None,
        mean_seg_len_pct: None,
        g_tsp: None,
        g_kp: None,
        elapsed_ms: None,
    };
    let inst = match &named.instance {
        Ok(i) => i,
        Err(e) => return RunResult { row, error: Some(e.clone()), timeline: Vec::new() },
    };
    row.category = Category::classify(inst).label().to_string();
    let cfg = SearchConfig {
        clock: settings.clock,
        ..SearchConfig::new(version.coord, version.kps, settings.timeout_ms, seed)
    };
    let outcome = ttps(inst, &cfg).and_then(|(sol, stats)| {
        let record = SolutionRecord::new(inst, &sol.tour, &sol.plan, stats.elapsed_ms, seed);
        let back = read_solution(inst, &write_solution(inst, &record)?)?;
        if !approx_eq(back.recomputed_objective, sol.objective, 1e-6) {
            return Err(TtpError::InvalidSolution(format!(
                "stored objective {} does not re-evaluate ({})",
                sol.objective, back.recomputed_objective
            )));
        }
        Ok((sol, stats))
    });
    match outcome {
        Ok((sol, stats)) => {
            row.objective = Some(sol.objective);
            row.restarts = Some(stats.restarts);
            row.accepted_2opt = Some(stats.accepted_two_opt);
            row.mean_seg_len_pct = Some(stats.mean_seg_len_pct());
            row.g_tsp = Some(stats.mean_g_tsp());
            row.g_kp = Some(stats.mean_g_kp());
            row.elapsed_ms = Some(stats.elapsed_ms);
            let secs = stats.elapsed_ms.div_ceil(1000);
            RunResult { row, error: None, timeline: stats.per_second(secs) }
        }
        Err(e) => RunResult { row, error: Some(e.to_string()), timeline: Vec::new() },
    }
}

fn mean_of(values: impl Iterator<Item = f64>) -> f64 {
    let (s, k) = values.fold((0.0, 0usize), |(s, k), v| (s + v, k + 1));
    if k == 0 {
        0.0
    } else {
        s / k as f64
    }
}

fn summarise(instances: &[NamedInstance], versions: &[Version], runs: &[RunResult]) -> Result<Vec<VersionSummary>> {
    let mut out = Vec::new();
    for named in instances {
        let of_instance: Vec<&RunResult> = runs.iter().filter(|r| r.row.instance == named.label).collect();
        let pool: Vec<f64> = of_instance.iter().filter_map(|r| r.row.objective).collect();
        let mut rows = Vec::new();
        for v in versions {
            let label = v.to_string();
            let ok: Vec<&RunRow> = of_instance
                .iter()
                .map(|r| &r.row)
                .filter(|r| r.version == label && r.objective.is_some())
                .collect();
            let objs: Vec<f64> = ok.iter().filter_map(|r| r.objective).collect();
            rows.push(VersionSummary {
                instance: named.label.clone(),
                version: label,
                runs_ok: ok.len(),
                objective: Summary::of(&objs),
                rdi: None,
                rdi_degenerate: false,
                mean_restarts: mean_of(ok.iter().filter_map(|r| r.restarts.map(|x| x as f64))),
                mean_g_tsp: mean_of(ok.iter().filter_map(|r| r.g_tsp)),
                mean_g_kp: mean_of(ok.iter().filter_map(|r| r.g_kp)),
                mean_seg_len_pct: mean_of(ok.iter().filter_map(|r| r.mean_seg_len_pct)),
            });
        }
        if !pool.is_empty() {
            let with: Vec<usize> = (0..rows.len()).filter(|&k| rows[k].objective.is_some()).collect();
            let means: Vec<f64> = with.iter().map(|&k| rows[k].objective.expect("checked").mean).collect();
            let rdi = compute_rdi(&means, &pool)?;
            for (j, &k) in with.iter().enumerate() {
                rows[k].rdi = Some(rdi.values[j]);
                rows[k].rdi_degenerate = rdi.degenerate;
            }
        }
        out.extend(rows);
    }
    Ok(out)
}

/// Runs every version `settings.runs` times on every instance, with seeds
/// `base_seed + run`, on a pool of `settings.workers` threads. Rows come out
/// ordered by instance, version and run whatever the completion order.
pub fn run_experiment(instances: &[NamedInstance], settings: &ExperimentSettings) -> Result<ExperimentReport> {
    if settings.versions.is_empty() || settings.runs == 0 {
        return Err(TtpError::Config("need at least one version and one run".into()));
    }
    if settings.timeout_ms == 0 {
        return Err(TtpError::Config("timeout must be positive".into()));
    }
    let mut jobs = Vec::new();
    for (i, _) in instances.iter().enumerate() {
        for v in &settings.versions {
            for run in 0..settings.runs {
                jobs.push((i, *v, run));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.workers.max(1))
        .build()
        .map_err(|e| TtpError::Config(e.to_string()))?;
    let runs: Vec<RunResult> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, v, run)| run_one(&instances[i], v, run, settings))
            .collect()
    });
    let summaries = summarise(instances, &settings.versions, &runs)?;
    Ok(ExperimentReport {
        provenance: Provenance {
            build: build_id(),
            settings: settings.clone(),
            seeds: (0..settings.runs).map(|r| settings.base_seed + r as u64).collect(),
        },
        runs,
        summaries,
    })
}
