//! Empirical probes of the variance-bounding machinery: the auxiliary graph
//! G* and its component bound, the second moment E(Q^(2 kappa)), superdense
//! convergence of E(Q^kappa) to Q, and the beta -> infinity matching model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{gen_family, FamilySpec};
use crate::graph::{DensityFamily, EdgeSubset, Graph, SuperdenseFn, UnionFind};
use crate::sampler::{estimate_q_kappa_mean, EstimateMode, EstimatorRun, SamplerConfig};

/// Component bound s = ceil((5 / (2c)) * sqrt(ln n)) for the auxiliary graph
/// of a c-subdense input.
pub fn component_bound_s(c: f64, n: usize) -> u64 {
    ((5.0 / (2.0 * c)) * (n as f64).ln().sqrt()).ceil() as u64
}

/// Report on the auxiliary graph G*.
#[derive(Debug, Clone, Serialize)]
pub struct GStarReport {
    /// Common-neighborhood threshold coefficient (default c^2 / 5).
    pub d0: f64,
    /// d0 * n / ln n.
    pub threshold: f64,
    /// rho: components of G*.
    pub gstar_components: usize,
    /// ceil((5 / (2c)) * sqrt(ln n)).
    pub bound_s: u64,
    /// rho <= bound_s.
    pub passed: bool,
}

/// Builds G* on the vertex set of `g`: u ~ v iff they share at least
/// d0 * n / ln n common neighbors. Neighborhoods are de-duplicated (simple
/// support, loops dropped), so parallel edges do not multiply intersections.
pub fn build_gstar(g: &Graph, c: f64, d0_override: Option<f64>) -> Result<(Graph, GStarReport)> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(Error::domain(format!("G* construction needs n >= 3, got {n}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::domain(format!("subdensity parameter c = {c} must be > 0")));
    }
    let d0 = d0_override.unwrap_or(c * c / 5.0);
    let threshold = d0 * n as f64 / (n as f64).ln();

    let adj = g.adjacency_bitsets();
    let words = n.div_ceil(64);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let mut common = 0u32;
            for w in 0..words {
                common += (adj[u][w] & adj[v][w]).count_ones();
            }
            if common as f64 >= threshold {
                edges.push((u, v));
            }
        }
    }
    let gstar = Graph::new(n, edges)?;

    let mut uf = UnionFind::new(n);
    for &(u, v) in gstar.edges() {
        uf.union(u, v);
    }
    let rho = uf.component_count();
    let bound_s = component_bound_s(c, n);
    let report = GStarReport {
        d0,
        threshold,
        gstar_components: rho,
        bound_s,
        passed: rho as u64 <= bound_s,
    };
    Ok((gstar, report))
}

/// Monte Carlo estimate of the second moment E(Q^(2 kappa(G_p))), via the
/// identity Q^(2 kappa) = (Q^2)^kappa.
pub fn second_moment(g: &Graph, p: f64, q: f64, t: u64, seed: u64) -> Result<EstimatorRun> {
    let cfg = SamplerConfig::new(1.0, seed)?.with_t(t);
    let mut run = estimate_q_kappa_mean(g, p, q * q, &cfg)?;
    run.mode = EstimateMode::SecondMoment;
    // The Q < 1 caveat belongs to Q itself here, not to Q^2.
    run.warnings.retain(|w| !w.starts_with("Q ="));
    if q < 1.0 {
        run.warnings.push(format!(
            "Q = {q} < 1: the second-moment bound comparison is stated for Q >= 1"
        ));
    }
    Ok(run)
}

/// Second-moment estimate paired with the 2 Q^(2s) reference bound.
#[derive(Debug, Clone, Serialize)]
pub struct SecondMomentReport {
    pub estimate: f64,
    /// 2 * Q^(2s) with s = component_bound_s(c, n).
    pub reference_bound: f64,
    pub bound_s: u64,
    pub within_bound: bool,
    pub t: u64,
    pub seed: u64,
}

pub fn second_moment_report(
    g: &Graph,
    p: f64,
    q: f64,
    t: u64,
    seed: u64,
    c: f64,
) -> Result<SecondMomentReport> {
    if !(q >= 1.0) {
        return Err(Error::domain(format!(
            "second-moment bound comparison requires Q >= 1, got Q = {q}"
        )));
    }
    let run = second_moment(g, p, q, t, seed)?;
    let s = component_bound_s(c, g.vertex_count());
    let reference = 2.0 * q.powf(2.0 * s as f64);
    Ok(SecondMomentReport {
        estimate: run.mean,
        reference_bound: reference,
        bound_s: s,
        within_bound: run.mean <= reference,
        t,
        seed,
    })
}

/// One grid point of the superdense convergence sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub estimate: f64,
    pub rel_error: f64,
}

/// Sweep result: per-n estimates of E(Q^kappa) on superdense instances and
/// their relative distance to the limit Q, plus notes for skipped sizes.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub notes: Vec<String>,
}

impl SweepReport {
    /// CSV with header `n,estimate,rel_error`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,estimate,rel_error\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}\n", row.n, row.estimate, row.rel_error));
        }
        out
    }
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut x = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// For each n in the grid, generates an f(n)-superdense graph and estimates
/// |E(Q^kappa) - Q| / Q with t samples. Grid points where f(n) >= n - 1 are
/// skipped with a note.
pub fn superdense_convergence(
    f: &SuperdenseFn,
    p: f64,
    q: f64,
    n_grid: &[usize],
    t: u64,
    seed: u64,
) -> Result<SweepReport> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for &n in n_grid {
        if n < 4 || f.eval(n) >= (n - 1) as f64 {
            notes.push(format!(
                "n = {n} skipped: f(n) = {} leaves no meaningful degree bound",
                f.eval(n.max(1))
            ));
            continue;
        }
        let spec = FamilySpec {
            family: DensityFamily::Superdense(*f),
            n,
        };
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(mix_seed(seed, n as u64));
        let g = gen_family(&spec, &mut rng)?;
        let cfg = SamplerConfig::new(1.0, mix_seed(seed, n as u64 ^ 0xabcdef))?.with_t(t);
        let run = estimate_q_kappa_mean(&g, p, q, &cfg)?;
        rows.push(SweepRow {
            n,
            estimate: run.mean,
            rel_error: (run.mean - q).abs() / q,
        });
    }
    Ok(SweepReport { rows, notes })
}

/// Closed-form partition function of the perfect-matching graph, with the
/// beta -> infinity reference Q^(n/2) and their ratio (p + (1-p) Q)^(n/2).
#[derive(Debug, Clone, Serialize)]
pub struct MatchingZ {
    pub z: f64,
    pub beta_infinity_reference: f64,
    pub ratio: f64,
}

pub fn matching_model_z(n: usize, p: f64, q: f64) -> Result<MatchingZ> {
    if n % 2 != 0 {
        return Err(Error::domain(format!(
            "matching model needs an even vertex count, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) || !(q > 0.0) {
        return Err(Error::domain(format!("invalid percolation parameters p = {p}, Q = {q}")));
    }
    let half = (n / 2) as i32;
    let per_edge = p * q + (1.0 - p) * q * q;
    Ok(MatchingZ {
        z: per_edge.powi(half),
        beta_infinity_reference: q.powi(half),
        ratio: (p + (1.0 - p) * q).powi(half),
    })
}

/// kappa of a percolation sample on the perfect-matching graph equals
/// n/2 + number of closed matching edges; handy as an exhaustive check.
pub fn matching_kappa_identity_holds(n: usize) -> Result<bool> {
    let g = Graph::perfect_matching(n)?;
    let m = g.edge_count();
    for mask in 0u64..(1 << m) {
        let subset = EdgeSubset::from_mask(m, mask);
        let kappa = crate::graph::components(&g, &subset).kappa;
        let closed = m - subset.count();
        if kappa != n / 2 + closed {
            return Ok(false);
        }
    }
    Ok(true)
}
