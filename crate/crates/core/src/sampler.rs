//! Monte Carlo estimation of E(Q^kappa(G_p)): percolation sampling, the
//! Chebyshev sample-count rule t = ceil(2 p(n) / eps^2), the zeta-scaled
//! Tutte estimator, the partition-function estimator and the contraction
//! ratio estimator for lambda(A).
//!
//! Determinism contract: sample i draws from ChaCha stream i of the master
//! seed, one draw per edge in edge-index order, and partial results are
//! reduced in a fixed batch order. Identical inputs and seed give
//! bit-identical output for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostics::component_bound_s;
use crate::error::{Error, Result};
use crate::exact::{EvalPoint, RCConfig};
use crate::graph::{classify_density, contract, DensityFamily, EdgeSubset, Graph, UnionFind};

/// Samples per parallel work item; fixed so that results never depend on the
/// number of worker threads.
const BATCH_SIZE: u64 = 1024;

/// What an [`EstimatorRun`] estimates; serialized into the JSON report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    Tutte,
    Z,
    QKappaMean,
    SecondMoment,
}

/// Sampling budget and reproducibility knobs.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    /// Relative-error target, > 0.
    pub epsilon: f64,
    /// Explicit sample count; wins over every derivation.
    pub t_override: Option<u64>,
    /// Polynomial variance bound p(n); yields t = ceil(2 p(n) / eps^2).
    pub variance_bound: Option<f64>,
    /// Master RNG seed; echoed in every report.
    pub seed: u64,
    /// Odd repetition count for median-of-means amplification; 1 = the
    /// paper's single run.
    pub fail_prob_amplification: u32,
    /// Subdensity parameter used when the sample count must be derived from
    /// the 2 Q^(2s) second-moment bound (the graph must pass the subdense
    /// test at this c).
    pub subdense_c: f64,
}

impl SamplerConfig {
    pub fn new(epsilon: f64, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::domain(format!("epsilon = {epsilon} must be > 0")));
        }
        Ok(SamplerConfig {
            epsilon,
            t_override: None,
            variance_bound: None,
            seed,
            fail_prob_amplification: 1,
            subdense_c: 1.0,
        })
    }

    pub fn with_t(mut self, t: u64) -> Self {
        self.t_override = Some(t);
        self
    }

    pub fn with_variance_bound(mut self, bound: f64) -> Self {
        self.variance_bound = Some(bound);
        self
    }

    pub fn with_amplification(mut self, reps: u32) -> Self {
        self.fail_prob_amplification = reps;
        self
    }

    pub fn with_subdense_c(mut self, c: f64) -> Self {
        self.subdense_c = c;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::domain(format!("epsilon = {} must be > 0", self.epsilon)));
        }
        if self.fail_prob_amplification == 0 || self.fail_prob_amplification % 2 == 0 {
            return Err(Error::domain(format!(
                "fail_prob_amplification = {} must be odd (median of an even count is ambiguous)",
                self.fail_prob_amplification
            )));
        }
        Ok(())
    }

    /// Resolves the sample count: explicit t, then the supplied variance
    /// bound, then the subdense 2 Q^(2s) bound (which requires the graph to
    /// pass the subdense test at `subdense_c`).
    pub fn resolve_sample_count(&self, g: &Graph, q: f64) -> Result<u64> {
        if let Some(t) = self.t_override {
            if t == 0 {
                return Err(Error::domain("sample count t = 0"));
            }
            return Ok(t);
        }
        let bound = match self.variance_bound {
            Some(b) => {
                if !(b > 0.0) || !b.is_finite() {
                    return Err(Error::domain(format!("variance bound {b} must be > 0")));
                }
                b
            }
            None => {
                let family = DensityFamily::Subdense(self.subdense_c);
                let passes = classify_density(g, &family)?;
                if !passes {
                    return Err(Error::domain(format!(
                        "graph fails the subdense test at c = {}; no principled variance bound, pass an explicit sample count or variance bound",
                        self.subdense_c
                    )));
                }
                let s = component_bound_s(self.subdense_c, g.vertex_count());
                2.0 * q.powf(2.0 * s as f64)
            }
        };
        let t = (2.0 * bound / (self.epsilon * self.epsilon)).ceil();
        if !(t >= 1.0) {
            return Err(Error::domain(format!(
                "derived sample count {t} is not positive"
            )));
        }
        Ok(t as u64)
    }
}

/// Outcome of one estimation run.
#[derive(Debug, Clone)]
pub struct EstimatorRun {
    /// Samples taken (per repetition when amplification > 1).
    pub t: u64,
    /// Sample mean of Q^kappa (median of repetition means under
    /// amplification).
    pub mean: f64,
    /// Sum of squared deviations from the mean; variance = m2 / (t - 1).
    pub m2: f64,
    /// zeta * mean in Tutte mode, mean itself in Z mode.
    pub estimate: f64,
    pub seed_used: u64,
    pub epsilon: f64,
    pub mode: EstimateMode,
    /// Non-fatal conditions (Q < 1 regime, failed density classification).
    pub warnings: Vec<String>,
}

impl EstimatorRun {
    /// Unbiased sample variance of the per-sample values.
    pub fn variance(&self) -> f64 {
        if self.t > 1 {
            self.m2 / (self.t - 1) as f64
        } else {
            0.0
        }
    }

    /// The JSON record consumed by the CLI:
    /// {estimate, mean, variance, t, seed, epsilon, mode}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "estimate": self.estimate,
            "mean": self.mean,
            "variance": self.variance(),
            "t": self.t,
            "seed": self.seed_used,
            "epsilon": self.epsilon,
            "mode": self.mode,
        })
    }
}

/// One percolation sample: each edge kept independently with probability p,
/// consuming exactly one uniform draw per edge in edge-index order.
pub fn sample_gp(g: &Graph, p: f64, rng: &mut impl Rng) -> Result<EdgeSubset> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::domain(format!("edge probability p = {p} not in [0, 1]")));
    }
    let mut subset = EdgeSubset::empty(g.edge_count());
    for i in 0..g.edge_count() {
        let draw: f64 = rng.random();
        if draw < p {
            subset.insert(i);
        }
    }
    Ok(subset)
}

/// Fused sampling kernel: same draws as [`sample_gp`], but unions edges on
/// the fly and returns kappa without materializing the subset.
fn sample_kappa(g: &Graph, p: f64, rng: &mut ChaCha8Rng, uf: &mut UnionFind) -> usize {
    uf.reset();
    for &(u, v) in g.edges() {
        let draw: f64 = rng.random();
        if draw < p {
            uf.union(u, v);
        }
    }
    uf.component_count()
}

/// Per-batch accumulator: Welford mean/m2 plus a streaming log-sum-exp that
/// survives value overflow (kappa * ln Q beyond f64 range).
#[derive(Debug, Clone, Copy)]
struct BatchStats {
    count: u64,
    mean: f64,
    m2: f64,
    log_max: f64,
    log_scaled_sum: f64,
}

impl BatchStats {
    fn empty() -> Self {
        BatchStats {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            log_max: f64::NEG_INFINITY,
            log_scaled_sum: 0.0,
        }
    }

    fn push(&mut self, value: f64, log_value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
        if log_value > self.log_max {
            self.log_scaled_sum = self.log_scaled_sum * (self.log_max - log_value).exp() + 1.0;
            self.log_max = log_value;
        } else {
            self.log_scaled_sum += (log_value - self.log_max).exp();
        }
    }

    fn merge(self, other: BatchStats) -> BatchStats {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64) * (other.count as f64) / count as f64;
        let log_max = self.log_max.max(other.log_max);
        let log_scaled_sum = self.log_scaled_sum * (self.log_max - log_max).exp()
            + other.log_scaled_sum * (other.log_max - log_max).exp();
        BatchStats {
            count,
            mean,
            m2,
            log_max,
            log_scaled_sum,
        }
    }
}

/// Runs `t` samples on streams [stream_offset, stream_offset + t) and returns
/// the merged statistics of Q^kappa.
fn run_samples(g: &Graph, p: f64, q: f64, t: u64, seed: u64, stream_offset: u64) -> BatchStats {
    let ln_q = q.ln();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let batches = t.div_ceil(BATCH_SIZE);
    let stats: Vec<BatchStats> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * BATCH_SIZE;
            let hi = (lo + BATCH_SIZE).min(t);
            let mut uf = UnionFind::new(g.vertex_count());
            let mut acc = BatchStats::empty();
            for i in lo..hi {
                let mut rng = base.clone();
                rng.set_stream(stream_offset + i);
                let kappa = sample_kappa(g, p, &mut rng, &mut uf);
                let log_value = kappa as f64 * ln_q;
                let value = if log_value.abs() < 700.0 {
                    q.powi(kappa as i32)
                } else {
                    log_value.exp() // overflows to inf / underflows to 0
                };
                acc.push(value, log_value);
            }
            acc
        })
        .collect();
    stats
        .into_iter()
        .fold(BatchStats::empty(), |a, b| a.merge(b))
}

/// Estimates E(Q^kappa(G_p)) from t independent percolation samples. With
/// amplification r > 1 the mean is the median of r independent repetition
/// means (repetition j uses streams [j*t, (j+1)*t)).
pub fn estimate_q_kappa_mean(g: &Graph, p: f64, q: f64, cfg: &SamplerConfig) -> Result<EstimatorRun> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::domain(format!("edge probability p = {p} not in [0, 1]")));
    }
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain(format!("cluster weight Q = {q} must be > 0")));
    }
    let mut warnings = Vec::new();
    if q < 1.0 {
        warnings.push(format!(
            "Q = {q} < 1: the mean stays unbiased but the variance guarantee is only claimed for Q >= 1"
        ));
    }
    let t = cfg.resolve_sample_count(g, q)?;
    let reps = cfg.fail_prob_amplification as u64;
    let mut runs: Vec<BatchStats> = (0..reps)
        .map(|j| run_samples(g, p, q, t, cfg.seed, j * t))
        .collect();
    // Median-of-means: pick the repetition whose mean is the median.
    runs.sort_by(|a, b| a.mean.total_cmp(&b.mean));
    let chosen = runs[runs.len() / 2];
    let mut mean = chosen.mean;
    let mut m2 = chosen.m2;
    if !mean.is_finite() {
        // Individual values overflowed f64; recover the mean in log space.
        let log_mean = chosen.log_max + chosen.log_scaled_sum.ln() - (chosen.count as f64).ln();
        mean = log_mean.exp();
        m2 = f64::INFINITY;
        warnings.push("per-sample values overflowed; mean recovered in log space, variance unavailable".into());
    }
    Ok(EstimatorRun {
        t,
        mean,
        m2,
        estimate: mean,
        seed_used: cfg.seed,
        epsilon: cfg.epsilon,
        mode: EstimateMode::QKappaMean,
        warnings,
    })
}

/// Tutte estimator: zeta * mean of Q^kappa(G_p) at p = (y-1)/y. Requires
/// x > 1 and y > 1; a failed density classification is reported as a warning
/// because the mean is unconditionally unbiased.
pub fn estimate_tutte(g: &Graph, point: &EvalPoint, cfg: &SamplerConfig) -> Result<EstimatorRun> {
    point.require_sampler_domain()?;
    let p = point.edge_probability();
    let q = point.q();
    let mut run = estimate_q_kappa_mean(g, p, q, cfg)?;
    match classify_density(g, &DensityFamily::Subdense(cfg.subdense_c)) {
        Ok(true) => {}
        Ok(false) => run.warnings.push(format!(
            "graph fails the subdense test at c = {}; the estimate is unbiased but the variance bound is not guaranteed",
            cfg.subdense_c
        )),
        Err(e) => run.warnings.push(format!("density classification unavailable: {e}")),
    }
    let kappa_full = {
        let mut uf = UnionFind::new(g.vertex_count());
        for &(u, v) in g.edges() {
            uf.union(u, v);
        }
        uf.component_count()
    };
    if kappa_full > 1 {
        run.warnings.push(format!(
            "graph has {kappa_full} components; the zeta scaling assumes a connected graph and the estimate is off by (x-1)^{}",
            kappa_full - 1
        ));
    }
    let (n, m) = (g.vertex_count(), g.edge_count());
    let zeta = point.zeta(n, m);
    run.estimate = zeta * run.mean;
    if !run.estimate.is_finite() && run.mean.is_finite() && run.mean > 0.0 {
        // zeta (or the product) exceeds f64 range; report the natural log.
        let log_zeta = m as f64 * point.y.ln()
            - (point.x - 1.0).ln()
            - n as f64 * (point.y - 1.0).ln();
        run.warnings.push(format!(
            "estimate exceeds f64 range; ln(estimate) = {:.6}",
            log_zeta + run.mean.ln()
        ));
    }
    run.mode = EstimateMode::Tutte;
    Ok(run)
}

/// Partition-function estimator: Z = E(Q^kappa(G_p)) directly, no zeta.
pub fn estimate_z(g: &Graph, rc: &RCConfig, cfg: &SamplerConfig) -> Result<EstimatorRun> {
    let mut run = estimate_q_kappa_mean(g, rc.p, rc.q_weight, cfg)?;
    run.mode = EstimateMode::Z;
    Ok(run)
}

/// Result of the ratio estimator for lambda(A).
#[derive(Debug, Clone)]
pub struct LambdaEstimate {
    /// p^|A| * Z_{G/A} / Z_G from two independent runs.
    pub value: f64,
    /// Per-run epsilon, chosen so (1 + eps')^2 <= 1 + eps.
    pub epsilon_sub: f64,
    pub numerator: EstimatorRun,
    pub denominator: EstimatorRun,
}

impl LambdaEstimate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "estimate": self.value,
            "epsilon_sub": self.epsilon_sub,
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
        })
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Estimates lambda(A) = p^|A| * Z_{G/A} / Z_G with two independent
/// estimator runs whose relative errors compose as (1 + eps')^2.
pub fn estimate_lambda(
    g: &Graph,
    rc: &RCConfig,
    a: &EdgeSubset,
    cfg: &SamplerConfig,
) -> Result<LambdaEstimate> {
    if a.capacity() != g.edge_count() {
        return Err(Error::domain(format!(
            "edge subset capacity {} does not match graph edge count {}",
            a.capacity(),
            g.edge_count()
        )));
    }
    let epsilon_sub = (1.0 + cfg.epsilon).sqrt() - 1.0;
    let sub = |salt: u64| -> SamplerConfig {
        let mut c = cfg.clone();
        c.epsilon = epsilon_sub;
        c.seed = splitmix64(cfg.seed ^ salt);
        c
    };
    let contracted = contract(g, a);
    let numerator = estimate_z(&contracted, rc, &sub(0x6e756d))?;
    let denominator = estimate_z(g, rc, &sub(0x64656e))?;
    if !(denominator.estimate > 0.0) {
        return Err(Error::domain(format!(
            "denominator Z estimate {} is not positive",
            denominator.estimate
        )));
    }
    let value = rc.p.powi(a.count() as i32) * numerator.estimate / denominator.estimate;
    Ok(LambdaEstimate {
        value,
        epsilon_sub,
        numerator,
        denominator,
    })
}
