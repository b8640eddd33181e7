use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Example;
use crate::error::{Result, TtpError};

/// Two inputs, two rectified hidden layers of equal width, one sigmoid
/// output. Parameters live in one flat vector:
/// `w1 (h x 2) | b1 (h) | w2 (h x h) | b2 (h) | w3 (h) | b3`.
#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    width: usize,
    params: Vec<f64>,
}

struct Layout {
    w1: usize,
    b1: usize,
    w2: usize,
    b2: usize,
    w3: usize,
    b3: usize,
    len: usize,
}

fn layout(h: usize) -> Layout {
    let w1 = 0;
    let b1 = w1 + 2 * h;
    let w2 = b1 + h;
    let b2 = w2 + h * h;
    let w3 = b2 + h;
    let b3 = w3 + h;
    Layout { w1, b1, w2, b2, w3, b3, len: b3 + 1 }
}

/// Hidden width for an instance with `m` items.
pub fn hidden_width(m: usize) -> usize {
    ((m.max(1) as f64).ln().round() as usize).max(2)
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

struct Trace {
    z1: Vec<f64>,
    a1: Vec<f64>,
    z2: Vec<f64>,
    a2: Vec<f64>,
    z3: f64,
}

impl Classifier {
    /// Zero-initialised network.
    pub fn zeros(width: usize) -> Self {
        assert!(width > 0);
        Classifier { width, params: vec![0.0; layout(width).len] }
    }

    /// He-uniform weights, small positive biases in the hidden layers.
    pub fn random<R: Rng>(width: usize, rng: &mut R) -> Self {
        let mut c = Self::zeros(width);
        let l = layout(width);
        let h = width;
        let lim1 = (6.0f64 / 2.0).sqrt();
        let limh = (6.0 / h as f64).sqrt();
        for p in &mut c.params[l.w1..l.b1] {
            *p = rng.gen_range(-lim1..lim1);
        }
        for p in &mut c.params[l.b1..l.w2] {
            *p = 0.01;
        }
        for p in &mut c.params[l.w2..l.b2] {
            *p = rng.gen_range(-limh..limh);
        }
        for p in &mut c.params[l.b2..l.w3] {
            *p = 0.01;
        }
        for p in &mut c.params[l.w3..l.b3] {
            *p = rng.gen_range(-limh..limh);
        }
        c
    }

    pub fn from_params(width: usize, params: Vec<f64>) -> Result<Self> {
        if width == 0 || params.len() != layout(width).len {
            return Err(TtpError::Training(format!(
                "expected {} parameters for width {width}, got {}",
                layout(width.max(1)).len,
                params.len()
            )));
        }
        Ok(Classifier { width, params })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn trace(&self, nipr: f64, np: f64) -> Trace {
        let h = self.width;
        let l = layout(h);
        let p = &self.params;
        let mut z1 = vec![0.0; h];
        let mut a1 = vec![0.0; h];
        for j in 0..h {
            z1[j] = p[l.w1 + 2 * j] * nipr + p[l.w1 + 2 * j + 1] * np + p[l.b1 + j];
            a1[j] = z1[j].max(0.0);
        }
        let mut z2 = vec![0.0; h];
        let mut a2 = vec![0.0; h];
        for j in 0..h {
            let row = &p[l.w2 + j * h..l.w2 + (j + 1) * h];
            z2[j] = row.iter().zip(&a1).map(|(w, a)| w * a).sum::<f64>() + p[l.b2 + j];
            a2[j] = z2[j].max(0.0);
        }
        let z3 = p[l.w3..l.b3].iter().zip(&a2).map(|(w, a)| w * a).sum::<f64>() + p[l.b3];
        Trace { z1, a1, z2, a2, z3 }
    }

    /// Output logit.
    pub fn logit(&self, nipr: f64, np: f64) -> f64 {
        self.trace(nipr, np).z3
    }

    /// Probability that the item is collected.
    pub fn probability(&self, nipr: f64, np: f64) -> f64 {
        sigmoid(self.logit(nipr, np))
    }

    /// Thresholded prediction: collected iff the output is at least 0.5.
    pub fn predict(&self, nipr: f64, np: f64) -> bool {
        self.logit(nipr, np) >= 0.0
    }

    /// Mean binary cross-entropy over `data`.
    pub fn loss(&self, data: &[Example]) -> f64 {
        if data.is_empty() {
            return 0.0;
        }
        data.iter()
            .map(|ex| {
                let z = self.logit(ex.nipr, ex.np);
                softplus(z) - if ex.label { z } else { 0.0 }
            })
            .sum::<f64>()
            / data.len() as f64
    }

    /// Gradient of [`Classifier::loss`] with respect to the flat parameters.
    pub fn gradient(&self, data: &[Example]) -> Vec<f64> {
        let mut g = vec![0.0; self.params.len()];
        if data.is_empty() {
            return g;
        }
        let h = self.width;
        let l = layout(h);
        let p = &self.params;
        let scale = 1.0 / data.len() as f64;
        let mut d2 = vec![0.0; h];
        for ex in data {
            let t = self.trace(ex.nipr, ex.np);
            let d3 = (sigmoid(t.z3) - if ex.label { 1.0 } else { 0.0 }) * scale;
            g[l.b3] += d3;
            for j in 0..h {
                g[l.w3 + j] += d3 * t.a2[j];
                d2[j] = if t.z2[j] > 0.0 { d3 * p[l.w3 + j] } else { 0.0 };
                g[l.b2 + j] += d2[j];
            }
            for j in 0..h {
                for k in 0..h {
                    g[l.w2 + j * h + k] += d2[j] * t.a1[k];
                }
            }
            for k in 0..h {
                if t.z1[k] <= 0.0 {
                    continue;
                }
                let d1: f64 = (0..h).map(|j| d2[j] * p[l.w2 + j * h + k]).sum();
                g[l.w1 + 2 * k] += d1 * ex.nipr;
                g[l.w1 + 2 * k + 1] += d1 * ex.np;
                g[l.b1 + k] += d1;
            }
        }
        g
    }

    /// Number of examples whose thresholded prediction matches the label.
    pub fn correct(&self, data: &[Example]) -> usize {
        data.iter().filter(|ex| self.predict(ex.nipr, ex.np) == ex.label).count()
    }
}

/// Optimiser and selection settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Independently initialised models, the best on validation is kept.
    pub models: usize,
    pub max_epochs: usize,
    /// Epochs without a validation gain before a model stops.
    pub patience: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            models: 10,
            max_epochs: 200,
            patience: 20,
            batch_size: 32,
            learning_rate: 1e-3,
        }
    }
}

/// Outcome of [`train`].
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: Classifier,
    /// Index of the selected model among those trained.
    pub selected: usize,
    pub validation_correct: usize,
    pub validation_size: usize,
    /// Forward and backward example passes summed over all models.
    pub example_passes: u64,
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    const B1: f64 = 0.9;
    const B2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(n: usize) -> Self {
        Adam { m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - Self::B1.powi(self.t);
        let c2 = 1.0 - Self::B2.powi(self.t);
        for k in 0..params.len() {
            self.m[k] = Self::B1 * self.m[k] + (1.0 - Self::B1) * grad[k];
            self.v[k] = Self::B2 * self.v[k] + (1.0 - Self::B2) * grad[k] * grad[k];
            params[k] -= lr * (self.m[k] / c1) / ((self.v[k] / c2).sqrt() + Self::EPS);
        }
    }
}

/// Trains one model; returns it with its validation score and work done.
fn train_one(
    width: usize,
    train: &[Example],
    validation: &[Example],
    cfg: &TrainConfig,
    seed: u64,
    deadline: Option<Instant>,
) -> (Classifier, usize, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = Classifier::random(width, &mut rng);
    let mut adam = Adam::new(model.params.len());
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut batch = Vec::with_capacity(cfg.batch_size);
    let mut best = (model.clone(), model.correct(validation));
    let mut passes = validation.len() as u64;
    let mut stale = 0;
    for _ in 0..cfg.max_epochs {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size.max(1)) {
            batch.clear();
            batch.extend(chunk.iter().map(|&k| train[k]));
            let g = model.gradient(&batch);
            adam.step(&mut model.params, &g, cfg.learning_rate);
        }
        let score = model.correct(validation);
        passes += (train.len() + validation.len()) as u64;
        if score > best.1 {
            best = (model.clone(), score);
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.patience || score == validation.len() {
                break;
            }
        }
    }
    (best.0, best.1, passes)
}

/// Trains `cfg.models` networks of the given width in parallel, each from
/// its own seed derived from `seed`, and keeps the one with the most correct
/// validation examples (lowest index on ties). An empty validation part
/// falls back to scoring on the training part. A wall-clock `deadline`
/// stops epochs early.
pub fn train(
    set: &super::TrainingSet,
    width: usize,
    cfg: &TrainConfig,
    seed: u64,
    deadline: Option<Instant>,
) -> Result<TrainOutcome> {
    if set.train.is_empty() {
        return Err(TtpError::Training("empty training set".into()));
    }
    if cfg.models == 0 {
        return Err(TtpError::Training("at least one model must be trained".into()));
    }
    let validation = if set.validation.is_empty() { &set.train } else { &set.validation };
    let results: Vec<_> = (0..cfg.models)
        .into_par_iter()
        .map(|k| {
            let s = seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            train_one(width, &set.train, validation, cfg, s, deadline)
        })
        .collect();
    let example_passes = results.iter().map(|r| r.2).sum();
    let (selected, (model, correct, _)) = results
        .into_iter()
        .enumerate()
        .fold(None::<(usize, (Classifier, usize, u64))>, |acc, (k, r)| match acc {
            Some((_, ref best)) if best.1 >= r.1 => acc,
            _ => Some((k, r)),
        })
        .expect("at least one model");
    Ok(TrainOutcome {
        model,
        selected,
        validation_correct: correct,
        validation_size: validation.len(),
        example_passes,
    })
}
