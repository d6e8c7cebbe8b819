//! Sampling estimates of moments and Sobolev norms.
//!
//! Paths are simulated on the kernel grid: each Wiener factor gets `m`
//! independent increments `ΔW_k ~ N(0, 1/m)` per sample and every variable is
//! realized as `X_i = Σ_k h_i(k) ΔW^{(α_i)}_k`.
//!
//! Samples are produced in fixed-size chunks. Chunk `c` of factor `α` draws
//! from its own ChaCha stream keyed by `(seed, c, α)`, and per-chunk
//! statistics are merged in a fixed pairwise tree, so every result is a
//! function of `(seed, n, chunk size)` alone and not of the worker count.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::functional::{CompiledPolynomial, Polynomial, VariableAtlas};
use crate::kernel::Component;
use crate::moments::{derivative_norm_squared, GaussianMoments, MomentError};
use crate::scalar::{format_rational, to_f64};

pub const DEFAULT_CHUNK_SIZE: usize = 4096;

/// Consistency checks flag any `|z|` above this many standard errors.
pub const Z_THRESHOLD: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonteCarloError {
    #[error("sample batch does not cover variable {0:?}")]
    MissingVariable(String),
    #[error("sample count must be at least 1")]
    EmptyBatch,
    #[error("chunk size must be at least 1")]
    ZeroChunk,
    #[error("norm exponent p must be a positive finite number, got {0}")]
    InvalidExponent(f64),
    #[error("could not start a pool of {0} workers")]
    Pool(usize),
    #[error(transparent)]
    Moment(#[from] MomentError),
}

/// Sampling parameters. `workers: None` uses the global rayon pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub chunk_size: usize,
    pub workers: Option<usize>,
}

impl SamplerConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, chunk_size: DEFAULT_CHUNK_SIZE, workers: None }
    }

    pub fn with_chunk_size(mut self, chunk_size: usize) -> Self {
        self.chunk_size = chunk_size;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T, MonteCarloError> {
        match self.workers {
            None => Ok(job()),
            Some(w) => {
                let pool =
                    rayon::ThreadPoolBuilder::new().num_threads(w).build().map_err(|_| MonteCarloError::Pool(w))?;
                Ok(pool.install(job))
            }
        }
    }
}

/// Realizations of every atlas variable, row-major (`n` rows).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    seed: u64,
    m: usize,
    chunk_size: usize,
    names: Vec<String>,
    values: Vec<f64>,
}

impl SampleBatch {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    pub fn n(&self) -> usize {
        if self.names.is_empty() {
            0
        } else {
            self.values.len() / self.names.len()
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        let d = self.names.len();
        &self.values[i * d..(i + 1) * d]
    }

    /// All realizations of variable `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        let d = self.names.len();
        self.values.iter().skip(j).step_by(d).copied()
    }

    fn chunks(&self) -> impl IndexedParallelIterator<Item = &[f64]> {
        let d = self.names.len().max(1);
        self.values.par_chunks(self.chunk_size * d)
    }
}

fn stream(seed: u64, chunk: usize, component: Component) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((chunk as u64) << 1) | (component.index() as u64 - 1));
    rng
}

/// Simulates `n` joint realizations of the atlas variables.
pub fn realize_samples(
    atlas: &Arc<VariableAtlas>,
    n: usize,
    config: &SamplerConfig,
) -> Result<SampleBatch, MonteCarloError> {
    if n == 0 {
        return Err(MonteCarloError::EmptyBatch);
    }
    if config.chunk_size == 0 {
        return Err(MonteCarloError::ZeroChunk);
    }
    let m = atlas.m();
    let d = atlas.len();
    let scale = (1.0 / m as f64).sqrt();
    let kernels: Vec<(usize, Vec<f64>)> = atlas
        .variables()
        .iter()
        .map(|v| (v.component.index() as usize - 1, v.kernel.values().iter().map(to_f64).collect()))
        .collect();
    let chunk_size = config.chunk_size;
    let num_chunks = n.div_ceil(chunk_size);
    let seed = config.seed;

    let chunks: Vec<Vec<f64>> = config.run(|| {
        (0..num_chunks)
            .into_par_iter()
            .map(|c| {
                let rows = chunk_size.min(n - c * chunk_size);
                let mut rngs = [stream(seed, c, Component::One), stream(seed, c, Component::Two)];
                let mut out = Vec::with_capacity(rows * d);
                let mut increments = [vec![0.0; m], vec![0.0; m]];
                for _ in 0..rows {
                    for (rng, dw) in rngs.iter_mut().zip(increments.iter_mut()) {
                        for slot in dw.iter_mut() {
                            let z: f64 = rng.sample(StandardNormal);
                            *slot = z * scale;
                        }
                    }
                    for (comp, h) in &kernels {
                        let dw = &increments[*comp];
                        out.push(h.iter().zip(dw).map(|(a, b)| a * b).sum());
                    }
                }
                out
            })
            .collect()
    })?;

    Ok(SampleBatch {
        seed,
        m,
        chunk_size,
        names: atlas.variables().iter().map(|v| v.name.clone()).collect(),
        values: chunks.concat(),
    })
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy)]
struct Running {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Running {
    const EMPTY: Running = Running { count: 0.0, mean: 0.0, m2: 0.0 };

    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(a: Running, b: Running) -> Running {
        if a.count == 0.0 {
            return b;
        }
        if b.count == 0.0 {
            return a;
        }
        let count = a.count + b.count;
        let delta = b.mean - a.mean;
        Running {
            count,
            mean: a.mean + delta * (b.count / count),
            m2: a.m2 + b.m2 + delta * delta * (a.count * b.count / count),
        }
    }

    fn estimate(&self) -> Estimate {
        let var = if self.count > 1.0 { self.m2 / (self.count - 1.0) } else { 0.0 };
        Estimate { mean: self.mean, stderr: (var.max(0.0) / self.count).sqrt() }
    }
}

fn tree_merge(parts: &[Running]) -> Running {
    match parts.len() {
        0 => Running::EMPTY,
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            Running::merge(tree_merge(l), tree_merge(r))
        }
    }
}

/// Mean and standard error of `statistic` over the batch rows.
fn estimate_statistic<F>(batch: &SampleBatch, config: &SamplerConfig, statistic: F) -> Result<Estimate, MonteCarloError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let d = batch.names.len().max(1);
    let parts: Vec<Running> = config.run(|| {
        batch
            .chunks()
            .map(|chunk| {
                let mut acc = Running::EMPTY;
                for row in chunk.chunks(d) {
                    acc.push(statistic(row));
                }
                acc
            })
            .collect()
    })?;
    Ok(tree_merge(&parts).estimate())
}

/// Lowers `f` onto the batch column layout.
fn bind(f: &Polynomial, batch: &SampleBatch) -> Result<(CompiledPolynomial, Vec<usize>), MonteCarloError> {
    let atlas = f.atlas();
    let mut columns = Vec::with_capacity(atlas.len());
    for i in 0..atlas.len() {
        let name = &atlas.variable(i).name;
        match batch.names.iter().position(|n| n == name) {
            Some(j) => columns.push(j),
            None if f.uses_variable(i) => return Err(MonteCarloError::MissingVariable(name.clone())),
            None => columns.push(usize::MAX),
        }
    }
    Ok((f.compile(), columns))
}

fn gather(row: &[f64], columns: &[usize], scratch: &mut Vec<f64>) {
    scratch.clear();
    scratch.extend(columns.iter().map(|&j| if j == usize::MAX { 0.0 } else { row[j] }));
}

/// Sample mean and standard error of `F` over the batch.
pub fn estimate_moment(
    f: &Polynomial,
    batch: &SampleBatch,
    config: &SamplerConfig,
) -> Result<Estimate, MonteCarloError> {
    let (compiled, columns) = bind(f, batch)?;
    estimate_statistic(batch, config, |row| {
        let mut vals = Vec::with_capacity(columns.len());
        gather(row, &columns, &mut vals);
        compiled.evaluate(&vals)
    })
}

/// Estimate of `‖F‖_{r,p} = E[‖∇^r F‖^p]^{1/p}` with a delta-method standard
/// error.
pub fn estimate_sobolev_norm(
    f: &Polynomial,
    r: usize,
    p: f64,
    batch: &SampleBatch,
    config: &SamplerConfig,
) -> Result<Estimate, MonteCarloError> {
    if !(p.is_finite() && p > 0.0) {
        return Err(MonteCarloError::InvalidExponent(p));
    }
    let integrand = derivative_norm_squared(f, r);
    let (compiled, columns) = bind(&integrand, batch)?;
    let half = p / 2.0;
    let inner = estimate_statistic(batch, config, |row| {
        let mut vals = Vec::with_capacity(columns.len());
        gather(row, &columns, &mut vals);
        compiled.evaluate(&vals).max(0.0).powf(half)
    })?;
    let mean = inner.mean.powf(1.0 / p);
    let stderr = if inner.stderr == 0.0 { 0.0 } else { inner.mean.powf(1.0 / p - 1.0) * inner.stderr / p };
    Ok(Estimate { mean, stderr })
}

/// `E[X_i X_j]` for every pair of batch variables.
pub fn empirical_covariance(
    batch: &SampleBatch,
    config: &SamplerConfig,
) -> Result<Vec<Vec<Estimate>>, MonteCarloError> {
    let d = batch.names.len();
    (0..d).map(|i| (0..d).map(|j| estimate_statistic(batch, config, |row| row[i] * row[j])).collect()).collect()
}

/// `|estimate − exact| / stderr`; zero when both the gap and the standard
/// error vanish, infinite when only the standard error does.
pub fn z_score(estimate: f64, stderr: f64, exact: f64) -> f64 {
    let gap = (estimate - exact).abs();
    if gap == 0.0 {
        0.0
    } else if stderr == 0.0 {
        f64::INFINITY
    } else {
        gap / stderr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyEntry {
    pub quantity: String,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
    pub exact_rational: Option<String>,
    pub z: f64,
    pub flagged: bool,
}

impl ConsistencyEntry {
    pub fn new(quantity: impl Into<String>, estimate: Estimate, exact: f64) -> Self {
        let z = z_score(estimate.mean, estimate.stderr, exact);
        Self {
            quantity: quantity.into(),
            estimate: estimate.mean,
            stderr: estimate.stderr,
            exact,
            exact_rational: None,
            z,
            flagged: z.is_nan() || z > Z_THRESHOLD,
        }
    }
}

/// Monte Carlo against exact cross-validation for one functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub chunk_size: usize,
    pub entries: Vec<ConsistencyEntry>,
}

impl ConsistencyReport {
    pub fn flagged(&self) -> bool {
        self.entries.iter().any(|e| e.flagged)
    }
}

/// Compares `E[F]` and `‖F‖_{r,2}` between the batch and the exact oracle.
pub fn consistency_report(
    f: &Polynomial,
    r: usize,
    batch: &SampleBatch,
    config: &SamplerConfig,
) -> Result<ConsistencyReport, MonteCarloError> {
    let oracle = GaussianMoments::new(f.atlas());
    let exact_mean = oracle.expectation(f)?;
    let exact_norm = oracle.sobolev_norm_p2(f, r)?;

    let mut mean_entry = ConsistencyEntry::new("expectation", estimate_moment(f, batch, config)?, to_f64(&exact_mean));
    mean_entry.exact_rational = Some(format_rational(&exact_mean));
    let mut norm_entry = ConsistencyEntry::new(
        format!("sobolev_norm_r{r}_p2"),
        estimate_sobolev_norm(f, r, 2.0, batch, config)?,
        exact_norm.value,
    );
    norm_entry.exact_rational = Some(format!("sqrt({})", format_rational(&exact_norm.squared)));

    Ok(ConsistencyReport {
        seed: batch.seed,
        n: batch.n(),
        m: batch.m,
        chunk_size: batch.chunk_size,
        entries: vec![mean_entry, norm_entry],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::Variable;
    use crate::kernel::Kernel;
    use crate::scalar::rational;

    fn atlas() -> Arc<VariableAtlas> {
        let e = Kernel::from_integers(&[1, 1]).unwrap();
        VariableAtlas::new(
            2,
            vec![
                Variable::new("X", Component::One, e.clone()),
                Variable::new("Y", Component::Two, e),
                Variable::new("Z", Component::One, Kernel::zero(2).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn batches_are_reproducible() {
        let a = atlas();
        let cfg = SamplerConfig::new(11).with_chunk_size(100);
        let b1 = realize_samples(&a, 1000, &cfg).unwrap();
        let b2 = realize_samples(&a, 1000, &cfg.with_workers(3)).unwrap();
        assert_eq!(b1, b2);
        assert_eq!(b1.n(), 1000);
        assert!(b1.column(2).all(|z| z == 0.0));
        assert_ne!(b1, realize_samples(&a, 1000, &SamplerConfig::new(12).with_chunk_size(100)).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        let a = atlas();
        assert_eq!(realize_samples(&a, 0, &SamplerConfig::new(1)), Err(MonteCarloError::EmptyBatch));
        assert_eq!(realize_samples(&a, 5, &SamplerConfig::new(1).with_chunk_size(0)), Err(MonteCarloError::ZeroChunk));
        let b = realize_samples(&a, 5, &SamplerConfig::new(1)).unwrap();
        let x = Polynomial::var(&a, 0);
        assert_eq!(
            estimate_sobolev_norm(&x, 1, 0.0, &b, &SamplerConfig::new(1)),
            Err(MonteCarloError::InvalidExponent(0.0))
        );
    }

    #[test]
    fn coverage_is_checked() {
        let a = atlas();
        let other =
            VariableAtlas::new(2, vec![Variable::new("W", Component::One, Kernel::from_integers(&[1, 1]).unwrap())])
                .unwrap();
        let b = realize_samples(&a, 10, &SamplerConfig::new(1)).unwrap();
        let w = Polynomial::var(&other, 0);
        assert_eq!(estimate_moment(&w, &b, &SamplerConfig::new(1)), Err(MonteCarloError::MissingVariable("W".into())));
    }

    #[test]
    fn constants_are_exact() {
        let a = atlas();
        let cfg = SamplerConfig::new(5);
        let b = realize_samples(&a, 777, &cfg).unwrap();
        let c = Polynomial::constant(&a, rational(7));
        assert_eq!(estimate_moment(&c, &b, &cfg).unwrap(), Estimate { mean: 7.0, stderr: 0.0 });
        let x = Polynomial::var(&a, 0);
        assert_eq!(estimate_sobolev_norm(&x, 1, 2.0, &b, &cfg).unwrap(), Estimate { mean: 1.0, stderr: 0.0 });
        let report = consistency_report(&c, 0, &b, &cfg).unwrap();
        assert!(report.entries.iter().all(|e| e.z == 0.0 && !e.flagged));
    }

    #[test]
    fn z_scores() {
        assert_eq!(z_score(1.0, 0.0, 1.0), 0.0);
        assert_eq!(z_score(1.0, 0.0, 2.0), f64::INFINITY);
        assert_eq!(z_score(1.5, 0.25, 1.0), 2.0);
        let bad = ConsistencyEntry::new("x", Estimate { mean: 1.0, stderr: 0.01 }, 2.0);
        assert!(bad.flagged);
    }
}
