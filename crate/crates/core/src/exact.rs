//! Ground-truth oracles: Tutte state sum, deletion-contraction, chromatic
//! specialization, random-cluster partition function, and the mu/lambda
//! distribution machinery. All are exhaustive and guarded by edge-count
//! limits; exact rational arithmetic is supported throughout.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::error::{Error, Result};
use crate::graph::{components, contract, kappa_of_mask, EdgeSubset, Graph, UnionFind};

/// Enumeration guard for the 2^m state sums.
pub const STATESUM_EDGE_GUARD: usize = 30;
/// Guard for the deletion-contraction recursion.
pub const DELCON_EDGE_GUARD: usize = 20;

/// Arithmetic the oracles are generic over; satisfied by `f64` (fast path)
/// and `BigRational` (exact path). Send + Sync because the state sums are
/// partitioned across threads.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + std::ops::Sub<Output = Self>
    + std::ops::Div<Output = Self>
    + FromPrimitive
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + std::ops::Sub<Output = Self>
        + std::ops::Div<Output = Self>
        + FromPrimitive
        + Send
        + Sync
{
}

/// b^e by binary exponentiation; b^0 = 1 even for b = 0.
pub fn scalar_pow<T: Scalar>(base: &T, mut exp: usize) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        exp >>= 1;
    }
    acc
}

/// Rational n/d.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Evaluation point (x, y) of the Tutte plane with its derived sampler
/// quantities Q = (x-1)(y-1), p = (y-1)/y and zeta = y^m / ((x-1)(y-1)^n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub x: f64,
    pub y: f64,
}

impl EvalPoint {
    pub fn new(x: f64, y: f64) -> Self {
        EvalPoint { x, y }
    }

    pub fn q(&self) -> f64 {
        (self.x - 1.0) * (self.y - 1.0)
    }

    pub fn edge_probability(&self) -> f64 {
        (self.y - 1.0) / self.y
    }

    /// zeta for a graph with n vertices and m edges. Computed directly when
    /// representable (so nice points like (2,2) stay bit-exact), falling back
    /// to the exp/ln form when the direct route over- or underflows.
    pub fn zeta(&self, n: usize, m: usize) -> f64 {
        let num = self.y.powi(m as i32);
        let den = (self.x - 1.0) * (self.y - 1.0).powi(n as i32);
        let direct = num / den;
        if direct.is_finite() && direct != 0.0 {
            return direct;
        }
        let log = m as f64 * self.y.ln() - (self.x - 1.0).ln() - n as f64 * (self.y - 1.0).ln();
        log.exp()
    }

    /// The sampler needs x > 1 and y > 1 (zeta finite, p in (0,1), Q > 0).
    pub fn require_sampler_domain(&self) -> Result<()> {
        if self.x <= 1.0 || self.y <= 1.0 {
            return Err(Error::domain(format!(
                "sampling requires x > 1 and y > 1 (got x = {}, y = {}); use the exact oracle for other points",
                self.x, self.y
            )));
        }
        Ok(())
    }
}

/// Uniform random-cluster parameters: edge probability p and cluster weight Q,
/// independent of any (x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RCConfig {
    pub p: f64,
    pub q_weight: f64,
}

impl RCConfig {
    pub fn new(p: f64, q_weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::domain(format!("edge probability p = {p} not in [0, 1]")));
        }
        if !(q_weight > 0.0) || !q_weight.is_finite() {
            return Err(Error::domain(format!("cluster weight Q = {q_weight} must be > 0")));
        }
        Ok(RCConfig { p, q_weight })
    }
}

fn guard(m: usize, limit: usize, what: &str) -> Result<()> {
    if m > limit {
        return Err(Error::domain(format!(
            "{what} enumerates 2^m subsets and refuses m = {m} > {limit}"
        )));
    }
    Ok(())
}

/// Sums `term(mask)` over all 2^m masks. Large enumerations are partitioned
/// into a fixed number of mask-prefix chunks evaluated in parallel and folded
/// in chunk order, so the result does not depend on the thread count.
fn masked_sum<T, F>(n: usize, m: usize, term: F) -> T
where
    T: Scalar,
    F: Fn(u64, &mut UnionFind) -> T + Send + Sync,
{
    use rayon::prelude::*;
    let total: u64 = 1 << m;
    let chunks: u64 = if m >= 18 { 256 } else { 1 };
    let per = total / chunks;
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut uf = UnionFind::new(n);
            let mut acc = T::zero();
            for mask in (c * per)..((c + 1) * per) {
                acc = acc + term(mask, &mut uf);
            }
            acc
        })
        .collect();
    partials.into_iter().fold(T::zero(), |a, b| a + b)
}

/// Exact Tutte polynomial by the Whitney rank expansion
/// T(x,y) = sum_A (x-1)^(r(E)-r(A)) (y-1)^(|A|-r(A)).
pub fn tutte_statesum<T: Scalar>(g: &Graph, x: &T, y: &T) -> Result<T> {
    let m = g.edge_count();
    guard(m, STATESUM_EDGE_GUARD, "tutte_statesum")?;
    let n = g.vertex_count();
    let rank_full = components(g, &EdgeSubset::full(m)).rank;

    let xm1 = x.clone() - T::one();
    let ym1 = y.clone() - T::one();
    // Power tables: exponents are bounded by n for (x-1) and m for (y-1).
    let xp = power_table(&xm1, n + 1);
    let yp = power_table(&ym1, m + 1);

    Ok(masked_sum(n, m, |mask, uf| {
        let kappa = kappa_of_mask(g, mask, uf);
        let rank = n - kappa;
        let in_count = mask.count_ones() as usize;
        xp[rank_full - rank].clone() * yp[in_count - rank].clone()
    }))
}

fn power_table<T: Scalar>(base: &T, len: usize) -> Vec<T> {
    let mut table = Vec::with_capacity(len);
    table.push(T::one());
    for k in 1..len {
        table.push(table[k - 1].clone() * base.clone());
    }
    table
}

/// Independent second oracle: the deletion-contraction recursion with
/// loop/bridge base cases. Agrees with [`tutte_statesum`] on its domain.
pub fn tutte_delcon<T: Scalar>(g: &Graph, x: &T, y: &T) -> Result<T> {
    guard(g.edge_count(), DELCON_EDGE_GUARD, "tutte_delcon")?;
    Ok(delcon_rec(g.clone(), x, y))
}

fn delcon_rec<T: Scalar>(g: Graph, x: &T, y: &T) -> T {
    let m = g.edge_count();
    if m == 0 {
        return T::one();
    }
    let e = m - 1;
    let (u, v) = g.edge(e);
    let mut rest = EdgeSubset::full(m);
    rest.remove(e);
    if u == v {
        // Loop: T = y * T(G - e).
        let deleted = drop_edge(&g, e);
        return y.clone() * delcon_rec(deleted, x, y);
    }
    let kappa_all = components(&g, &EdgeSubset::full(m)).kappa;
    let kappa_without = components(&g, &rest).kappa;
    if kappa_without > kappa_all {
        // Bridge: T = x * T(G / e).
        let single = EdgeSubset::from_indices(m, &[e]).expect("edge index in range");
        return x.clone() * delcon_rec(contract(&g, &single), x, y);
    }
    let single = EdgeSubset::from_indices(m, &[e]).expect("edge index in range");
    let contracted = contract(&g, &single);
    let deleted = drop_edge(&g, e);
    delcon_rec(deleted, x, y) + delcon_rec(contracted, x, y)
}

fn drop_edge(g: &Graph, e: usize) -> Graph {
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, &uv)| uv)
        .collect();
    Graph::new(g.vertex_count(), edges).expect("endpoints already validated")
}

/// Chromatic polynomial at an integer point via the specialization
/// P(G, lambda) = (-1)^r(E) * lambda^k(G) * T(1 - lambda, 0).
pub fn chromatic_eval(g: &Graph, lambda: i64) -> Result<BigInt> {
    let m = g.edge_count();
    guard(m, STATESUM_EDGE_GUARD, "chromatic_eval")?;
    let x = BigRational::from_i64(1 - lambda).expect("small integer");
    let y = BigRational::zero();
    let t = tutte_statesum(g, &x, &y)?;
    let full = components(g, &EdgeSubset::full(m));
    let sign = if full.rank % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    let lam = BigRational::from_i64(lambda).expect("small integer");
    let value = sign * scalar_pow(&lam, full.kappa) * t;
    debug_assert!(value.denom().is_one() || value.numer().is_zero());
    Ok(value.to_integer())
}

/// [`chromatic_eval`] collapsed to a double (lossy for huge counts).
pub fn chromatic_eval_f64(g: &Graph, lambda: i64) -> Result<f64> {
    use num_traits::ToPrimitive;
    let exact = chromatic_eval(g, lambda)?;
    Ok(exact.to_f64().unwrap_or(f64::NAN))
}

/// Exact random-cluster partition function
/// Z = sum_A p^|A| (1-p)^(m-|A|) Q^kappa(A).
pub fn z_exact<T: Scalar>(g: &Graph, p: &T, q: &T) -> Result<T> {
    let m = g.edge_count();
    guard(m, STATESUM_EDGE_GUARD, "z_exact")?;
    let n = g.vertex_count();
    let pp = power_table(p, m + 1);
    let cp = power_table(&(T::one() - p.clone()), m + 1);
    let qp = power_table(q, n + 1);
    Ok(masked_sum(n, m, |mask, uf| {
        let kappa = kappa_of_mask(g, mask, uf);
        let in_count = mask.count_ones() as usize;
        pp[in_count].clone() * cp[m - in_count].clone() * qp[kappa].clone()
    }))
}

/// Random-cluster probability of the single edge set `a`:
/// mu(A) = Z^-1 p^|A| (1-p)^(m-|A|) Q^kappa(A).
pub fn mu_exact<T: Scalar>(g: &Graph, p: &T, q: &T, a: &EdgeSubset) -> Result<T> {
    let m = g.edge_count();
    guard(m, STATESUM_EDGE_GUARD, "mu_exact")?;
    let z = z_exact(g, p, q)?;
    let kappa = components(g, a).kappa;
    let in_count = a.count();
    let weight = scalar_pow(p, in_count)
        * scalar_pow(&(T::one() - p.clone()), m - in_count)
        * scalar_pow(q, kappa);
    Ok(weight / z)
}

/// Distribution function lambda(A) = sum over supersets X of A of mu(X),
/// by direct enumeration of the 2^(m-|A|) supersets.
pub fn lambda_exact<T: Scalar>(g: &Graph, p: &T, q: &T, a: &EdgeSubset) -> Result<T> {
    let m = g.edge_count();
    guard(m, STATESUM_EDGE_GUARD, "lambda_exact")?;
    let n = g.vertex_count();
    let z = z_exact(g, p, q)?;
    let pp = power_table(p, m + 1);
    let cp = power_table(&(T::one() - p.clone()), m + 1);
    let qp = power_table(q, n + 1);

    let base: u64 = a.iter().fold(0, |acc, i| acc | (1 << i));
    let complement = !base & mask_all(m);
    let mut uf = UnionFind::new(n);
    let mut total = T::zero();
    // Enumerate X = A | Y over all submasks Y of the complement.
    let mut sub = complement;
    loop {
        let x_mask = base | sub;
        let kappa = kappa_of_mask(g, x_mask, &mut uf);
        let in_count = x_mask.count_ones() as usize;
        total = total + pp[in_count].clone() * cp[m - in_count].clone() * qp[kappa].clone();
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & complement;
    }
    Ok(total / z)
}

/// The contraction route for the same quantity:
/// lambda(A) = p^|A| * Z_{G/A} / Z_G.
pub fn lambda_exact_contraction<T: Scalar>(
    g: &Graph,
    p: &T,
    q: &T,
    a: &EdgeSubset,
) -> Result<T> {
    let m = g.edge_count();
    guard(m, STATESUM_EDGE_GUARD, "lambda_exact_contraction")?;
    let z = z_exact(g, p, q)?;
    let contracted = contract(g, a);
    let z_contracted = z_exact(&contracted, p, q)?;
    Ok(scalar_pow(p, a.count()) * z_contracted / z)
}

/// lambda(A) for every subset A at once (index = edge mask), via the
/// superset-sum transform over the mu weights. Guarded harder because it
/// materializes all 2^m values.
pub fn lambda_all_exact<T: Scalar>(g: &Graph, p: &T, q: &T) -> Result<Vec<T>> {
    let m = g.edge_count();
    guard(m, DELCON_EDGE_GUARD, "lambda_all_exact")?;
    let n = g.vertex_count();
    let pp = power_table(p, m + 1);
    let cp = power_table(&(T::one() - p.clone()), m + 1);
    let qp = power_table(q, n + 1);
    let mut uf = UnionFind::new(n);
    let size = 1usize << m;
    let mut w: Vec<T> = Vec::with_capacity(size);
    for mask in 0..size as u64 {
        let kappa = kappa_of_mask(g, mask, &mut uf);
        let in_count = mask.count_ones() as usize;
        w.push(pp[in_count].clone() * cp[m - in_count].clone() * qp[kappa].clone());
    }
    // Superset sums: after this, w[mask] = sum of weights over supersets.
    for b in 0..m {
        let bit = 1usize << b;
        for mask in 0..size {
            if mask & bit == 0 {
                let upper = w[mask | bit].clone();
                w[mask] = w[mask].clone() + upper;
            }
        }
    }
    let z = w[0].clone();
    Ok(w.into_iter().map(|v| v / z.clone()).collect())
}

fn mask_all(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}
