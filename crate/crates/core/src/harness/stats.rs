use serde::{Deserialize, Serialize};

use crate::error::{Result, TtpError};

/// Relative deviation index of each solver mean against a pooled range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rdi {
    pub values: Vec<f64>,
    /// The pool had a single distinct value, so every index is 100.
    pub degenerate: bool,
}

/// `(mean - min) / (max - min) * 100` for each mean, where `min` and `max`
/// range over `pool`, the objectives of every run of every compared solver.
pub fn compute_rdi(means: &[f64], pool: &[f64]) -> Result<Rdi> {
    if pool.is_empty() {
        return Err(TtpError::Config("RDI needs at least one objective".into()));
    }
    let min = pool.iter().copied().fold(f64::INFINITY, f64::min);
    let max = pool.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Ok(Rdi { values: vec![100.0; means.len()], degenerate: true });
    }
    Ok(Rdi {
        values: means.iter().map(|m| (m - min) / (max - min) * 100.0).collect(),
        degenerate: false,
    })
}

/// Order statistics and moments of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation, zero for fewer than two values.
    pub stddev: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let k = v.len();
        let mean = v.iter().sum::<f64>() / k as f64;
        let median = if k % 2 == 1 { v[k / 2] } else { (v[k / 2 - 1] + v[k / 2]) / 2.0 };
        let stddev = if k < 2 {
            0.0
        } else {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64).sqrt()
        };
        Some(Summary { max: v[k - 1], min: v[0], mean, median, stddev })
    }
}
