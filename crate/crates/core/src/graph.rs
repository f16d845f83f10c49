//! Multigraph substrate: edge-indexed graphs, component counting via
//! union-find, edge-set contraction and min-degree density classification.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Undirected multigraph over vertices `0..n`. Loops (`u == v`) and parallel
/// edges are permitted. Edge identity is the position in the edge list, so
/// edge subsets are index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, validating every endpoint against `n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::parse(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
        }
        Ok(Graph { n, edges })
    }

    /// Complete simple graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n.saturating_mul(n.saturating_sub(1)) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph { n, edges }
    }

    /// Perfect matching on `n` vertices (`n` even): edges (0,1), (2,3), ...
    pub fn perfect_matching(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::domain(format!(
                "perfect matching needs an even vertex count, got {n}"
            )));
        }
        Ok(Graph {
            n,
            edges: (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    /// Degrees with the multigraph convention: every incidence counts, and a
    /// loop contributes 2 to its vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Minimum degree (loops count twice). Zero for an empty vertex set.
    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Simple support: drops loops and merges parallel edges, keeping the
    /// first occurrence order of each normalized pair. This leaves the exact
    /// multigraph model and is only meant for consumers needing simple graphs.
    pub fn simplified(&self) -> Graph {
        let mut seen = std::collections::HashSet::new();
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                edges.push(key);
            }
        }
        Graph { n: self.n, edges }
    }

    /// Adjacency bitsets of the simple support, loops dropped. Row `u` has
    /// bit `v` set iff some edge joins the distinct vertices `u` and `v`.
    pub fn adjacency_bitsets(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; self.n];
        for &(u, v) in &self.edges {
            if u != v {
                adj[u][v / 64] |= 1 << (v % 64);
                adj[v][u / 64] |= 1 << (u % 64);
            }
        }
        adj
    }

    /// Parses the text format: first line `n m`, then `m` lines `u v`
    /// (0-based). Rejects out-of-range endpoints and malformed lines.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("empty graph file"))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing vertex count"))?
            .parse()
            .map_err(|_| Error::parse(format!("invalid vertex count in {header:?}")))?;
        let m: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing edge count"))?
            .parse()
            .map_err(|_| Error::parse(format!("invalid edge count in {header:?}")))?;
        if it.next().is_some() {
            return Err(Error::parse(format!("trailing tokens in header {header:?}")));
        }
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .ok_or_else(|| Error::parse(format!("malformed edge line {line:?}")))?
                .parse()
                .map_err(|_| Error::parse(format!("invalid endpoint in {line:?}")))?;
            let v: usize = it
                .next()
                .ok_or_else(|| Error::parse(format!("malformed edge line {line:?}")))?
                .parse()
                .map_err(|_| Error::parse(format!("invalid endpoint in {line:?}")))?;
            if it.next().is_some() {
                return Err(Error::parse(format!("trailing tokens in edge line {line:?}")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::parse(format!(
                "header declares {m} edges, file has {}",
                edges.len()
            )));
        }
        Graph::new(n, edges)
    }

    /// Serializes to the text format parsed by [`Graph::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Subset of a graph's edge indices, stored as a bit vector (a single machine
/// word when `m <= 64`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSubset {
    m: usize,
    words: Vec<u64>,
}

impl EdgeSubset {
    pub fn empty(m: usize) -> Self {
        EdgeSubset {
            m,
            words: vec![0; m.div_ceil(64)],
        }
    }

    pub fn full(m: usize) -> Self {
        let mut s = Self::empty(m);
        for i in 0..m {
            s.insert(i);
        }
        s
    }

    /// Low-order-bit mask over the first `min(m, 64)` edges.
    pub fn from_mask(m: usize, mask: u64) -> Self {
        let mut s = Self::empty(m);
        if !s.words.is_empty() {
            let keep = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    pub fn from_indices(m: usize, indices: &[usize]) -> Result<Self> {
        let mut s = Self::empty(m);
        for &i in indices {
            if i >= m {
                return Err(Error::domain(format!(
                    "edge index {i} out of range for m = {m}"
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Capacity in edges (the ambient m).
    pub fn capacity(&self) -> usize {
        self.m
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.m);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.m);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.m);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    /// Cardinality |A|.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Ascending member indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&i| self.contains(i))
    }
}

/// Union-find with union by size and path halving; reusable scratch for the
/// hot sampling and enumeration loops.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize);
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
        self.components = self.parent.len();
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut x = x as u32;
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x as usize
    }

    /// Merges the classes of `x` and `y`; returns true if they were distinct.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let mut rx = self.find(x);
        let mut ry = self.find(y);
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            std::mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx as u32;
        self.size[rx] += self.size[ry];
        self.components -= 1;
        true
    }

    pub fn component_count(&self) -> usize {
        self.components
    }
}

/// Component count and rank of a spanning subgraph (V, A).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentSummary {
    /// Number of connected components, isolated vertices included.
    pub kappa: usize,
    /// r(A) = n - kappa.
    pub rank: usize,
}

/// Counts components of the spanning subgraph (V, A). Isolated vertices are
/// components; the empty graph has kappa = 0.
pub fn components(g: &Graph, a: &EdgeSubset) -> ComponentSummary {
    let mut uf = UnionFind::new(g.vertex_count());
    components_with(g, a, &mut uf)
}

/// As [`components`], reusing caller-provided union-find scratch.
pub fn components_with(g: &Graph, a: &EdgeSubset, uf: &mut UnionFind) -> ComponentSummary {
    debug_assert_eq!(a.capacity(), g.edge_count());
    uf.reset();
    for i in a.iter() {
        let (u, v) = g.edge(i);
        uf.union(u, v);
    }
    let kappa = uf.component_count();
    ComponentSummary {
        kappa,
        rank: g.vertex_count() - kappa,
    }
}

/// Component count for a word-mask subset over the first `m <= 64` edges;
/// fast path for exhaustive enumeration.
pub fn kappa_of_mask(g: &Graph, mask: u64, uf: &mut UnionFind) -> usize {
    uf.reset();
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let (u, v) = g.edge(i);
        uf.union(u, v);
    }
    uf.component_count()
}

/// Contracts the edge set `a`: one vertex per component of (V, A), edge list
/// exactly the edges outside `a` with endpoints remapped. Loops and parallel
/// edges produced by the contraction are kept, so the result has m - |A| edges.
/// The j-th edge of the result corresponds to the j-th edge of `g` not in `a`.
pub fn contract(g: &Graph, a: &EdgeSubset) -> Graph {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for i in a.iter() {
        let (u, v) = g.edge(i);
        uf.union(u, v);
    }
    // Dense renumbering of component representatives in first-seen order.
    let mut label = vec![usize::MAX; n];
    let mut next = 0usize;
    for v in 0..n {
        let r = uf.find(v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        label[v] = label[r];
    }
    let edges = (0..g.edge_count())
        .filter(|&i| !a.contains(i))
        .map(|i| {
            let (u, v) = g.edge(i);
            (label[u], label[v])
        })
        .collect();
    Graph { n: next, edges }
}

/// Closed forms admitted for the superdense deficiency function f(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SuperdenseFn {
    /// f(n) = k.
    Const(f64),
    /// f(n) = n^gamma with gamma < 1.
    Power(f64),
    /// f(n) = n / ln n.
    NOverLogN,
}

impl SuperdenseFn {
    pub fn eval(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            SuperdenseFn::Const(k) => *k,
            SuperdenseFn::Power(gamma) => nf.powf(*gamma),
            SuperdenseFn::NOverLogN => nf / nf.ln(),
        }
    }

    /// Parses "k" (a number), "n^gamma", or "n/log n".
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(k) = t.parse::<f64>() {
            if k < 0.0 {
                return Err(Error::domain(format!("f(n) = {k} must be nonnegative")));
            }
            return Ok(SuperdenseFn::Const(k));
        }
        let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "n/logn" || compact == "n/log" || compact == "n/ln" || compact == "n/lnn" {
            return Ok(SuperdenseFn::NOverLogN);
        }
        if let Some(gamma) = compact.strip_prefix("n^") {
            let gamma: f64 = gamma
                .parse()
                .map_err(|_| Error::domain(format!("invalid exponent in {s:?}")))?;
            if gamma >= 1.0 {
                return Err(Error::domain(format!(
                    "n^{gamma} is not o(n); exponent must be < 1"
                )));
            }
            return Ok(SuperdenseFn::Power(gamma));
        }
        Err(Error::domain(format!(
            "cannot parse superdense f(n) from {s:?}; expected a constant, n^gamma or n/log n"
        )))
    }
}

impl std::fmt::Display for SuperdenseFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuperdenseFn::Const(k) => write!(f, "{k}"),
            SuperdenseFn::Power(g) => write!(f, "n^{g}"),
            SuperdenseFn::NOverLogN => write!(f, "n/log n"),
        }
    }
}

/// Minimum-degree graph families. All thresholds use the natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityFamily {
    /// min degree >= eps * n.
    EpsDense(f64),
    /// min degree >= c * n / sqrt(ln n).
    Subdense(f64),
    /// min degree >= n - f(n).
    Superdense(SuperdenseFn),
}

impl DensityFamily {
    /// The real-valued degree threshold for a graph on `n` vertices.
    pub fn threshold(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            DensityFamily::EpsDense(eps) => eps * nf,
            DensityFamily::Subdense(c) => c * nf / nf.ln().sqrt(),
            DensityFamily::Superdense(f) => nf - f.eval(n),
        }
    }
}

impl std::fmt::Display for DensityFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DensityFamily::EpsDense(e) => write!(f, "eps-dense({e})"),
            DensityFamily::Subdense(c) => write!(f, "subdense({c})"),
            DensityFamily::Superdense(sf) => write!(f, "superdense({sf})"),
        }
    }
}

/// Whether every vertex degree meets the family's threshold. Requires n >= 2
/// so ln n is positive.
pub fn classify_density(g: &Graph, family: &DensityFamily) -> Result<bool> {
    if g.vertex_count() < 2 {
        return Err(Error::domain(format!(
            "density classification needs n >= 2, got n = {}",
            g.vertex_count()
        )));
    }
    Ok(g.min_degree() as f64 >= family.threshold(g.vertex_count()))
}
