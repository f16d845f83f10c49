//! C ABI for the rctutte library.
//!
//! Conventions: graphs are opaque `RctGraph` handles created and released by
//! this library; every fallible function returns an [`RctStatus`] and writes
//! results through out-pointers; on failure a thread-local message is
//! available via [`rct_last_error_message`] until the next failing call on
//! the same thread. All functions catch panics and report them as
//! `RCT_STATUS_PANIC` instead of unwinding across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rctutte::error::Error;
use rctutte::exact::{self, EvalPoint, RCConfig};
use rctutte::generators::{gen_family, gen_plg, FamilySpec, PLGSpec};
use rctutte::graph::{DensityFamily, EdgeSubset, Graph, SuperdenseFn};
use rctutte::sampler::{self, SamplerConfig};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RctStatus {
    Ok = 0,
    /// File system failure.
    Io = 1,
    /// Malformed graph text.
    Parse = 2,
    /// Violated precondition (evaluation domain, guards, infeasible specs).
    Domain = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A path or string argument was not valid UTF-8.
    Utf8 = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

/// Opaque multigraph handle.
pub struct RctGraph {
    inner: Graph,
}

/// Outcome of a sampling run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RctEstimate {
    /// zeta-scaled value in Tutte mode, the plain mean in Z mode.
    pub estimate: f64,
    /// Sample mean of Q^kappa.
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Samples taken.
    pub t: u64,
    /// Seed the run used (echoed).
    pub seed: u64,
}

/// Graph families accepted by [`rct_generate_family`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RctFamily {
    /// min degree >= param * n.
    EpsDense = 0,
    /// min degree >= param * n / sqrt(ln n).
    Subdense = 1,
    /// min degree >= n - param.
    SuperdenseConst = 2,
    /// min degree >= n - n^param (param < 1).
    SuperdensePower = 3,
    /// min degree >= n - n / ln n (param ignored).
    SuperdenseNOverLogN = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> RctStatus {
    match err {
        Error::Io(_) => RctStatus::Io,
        Error::Parse(_) => RctStatus::Parse,
        Error::Domain(_) => RctStatus::Domain,
    }
}

fn fail(err: Error) -> RctStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

/// Runs `f` with panics converted to `RCT_STATUS_PANIC`.
fn guarded(f: impl FnOnce() -> RctStatus) -> RctStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("panic caught at the C boundary");
            RctStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const RctGraph) -> Option<&'a Graph> {
    unsafe { g.as_ref() }.map(|h| &h.inner)
}

fn emit_graph(out: *mut *mut RctGraph, graph: Graph) -> RctStatus {
    let handle = Box::new(RctGraph { inner: graph });
    unsafe { *out = Box::into_raw(handle) };
    RctStatus::Ok
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, RctStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(RctStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        RctStatus::Utf8
    })
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a graph from `m` edges given as parallel endpoint arrays.
///
/// # Safety
/// `us` and `vs` must point to `m` readable elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    out: *mut *mut RctGraph,
) -> RctStatus {
    guarded(|| {
        if out.is_null() || (m > 0 && (us.is_null() || vs.is_null())) {
            set_error("null pointer argument");
            return RctStatus::NullPointer;
        }
        let us = unsafe { std::slice::from_raw_parts(us, m) };
        let vs = unsafe { std::slice::from_raw_parts(vs, m) };
        let edges = us.iter().copied().zip(vs.iter().copied()).collect();
        match Graph::new(n, edges) {
            Ok(g) => emit_graph(out, g),
            Err(e) => fail(e),
        }
    })
}

/// Complete simple graph K_n.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_complete(n: usize, out: *mut *mut RctGraph) -> RctStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return RctStatus::NullPointer;
        }
        emit_graph(out, Graph::complete(n))
    })
}

/// Reads the graph text format ("n m" header, then one "u v" line per edge).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_read_file(
    path: *const c_char,
    out: *mut *mut RctGraph,
) -> RctStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return RctStatus::NullPointer;
        }
        let path = match unsafe { cstr(path) } {
            Ok(p) => p,
            Err(code) => return code,
        };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(Error::Io(e)),
        };
        match Graph::from_text(&text) {
            Ok(g) => emit_graph(out, g),
            Err(e) => fail(e),
        }
    })
}

/// Writes the graph text format.
///
/// # Safety
/// `g` must be a live handle from this library; `path` a NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_write_file(
    g: *const RctGraph,
    path: *const c_char,
) -> RctStatus {
    guarded(|| {
        let graph = match unsafe { graph_ref(g) } {
            Some(graph) => graph,
            None => {
                set_error("null graph handle");
                return RctStatus::NullPointer;
            }
        };
        let path = match unsafe { cstr(path) } {
            Ok(p) => p,
            Err(code) => return code,
        };
        match std::fs::write(path, graph.to_text()) {
            Ok(()) => RctStatus::Ok,
            Err(e) => fail(Error::Io(e)),
        }
    })
}

/// Vertex count; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_vertex_count(g: *const RctGraph) -> usize {
    unsafe { graph_ref(g) }.map_or(0, |g| g.vertex_count())
}

/// Edge count; 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_edge_count(g: *const RctGraph) -> usize {
    unsafe { graph_ref(g) }.map_or(0, |g| g.edge_count())
}

/// Minimum degree (loops count twice); 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_min_degree(g: *const RctGraph) -> usize {
    unsafe { graph_ref(g) }.map_or(0, |g| g.min_degree())
}

/// Releases a handle obtained from this library. Null is a no-op.
///
/// # Safety
/// `g` must be a live handle from this library or null; it must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn rct_graph_free(g: *mut RctGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Exact Tutte polynomial value by the 2^m state sum (m <= 30).
///
/// # Safety
/// `g` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rct_tutte_exact(
    g: *const RctGraph,
    x: f64,
    y: f64,
    out: *mut f64,
) -> RctStatus {
    guarded(|| {
        let (graph, slot) = match (unsafe { graph_ref(g) }, unsafe { out.as_mut() }) {
            (Some(graph), Some(slot)) => (graph, slot),
            _ => {
                set_error("null pointer argument");
                return RctStatus::NullPointer;
            }
        };
        match exact::tutte_statesum(graph, &x, &y) {
            Ok(v) => {
                *slot = v;
                RctStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact random-cluster partition function (m <= 30).
///
/// # Safety
/// `g` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rct_z_exact(
    g: *const RctGraph,
    p: f64,
    q: f64,
    out: *mut f64,
) -> RctStatus {
    guarded(|| {
        let (graph, slot) = match (unsafe { graph_ref(g) }, unsafe { out.as_mut() }) {
            (Some(graph), Some(slot)) => (graph, slot),
            _ => {
                set_error("null pointer argument");
                return RctStatus::NullPointer;
            }
        };
        if let Err(e) = RCConfig::new(p, q) {
            return fail(e);
        }
        match exact::z_exact(graph, &p, &q) {
            Ok(v) => {
                *slot = v;
                RctStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Chromatic polynomial at an integer number of colors, as a double.
///
/// # Safety
/// `g` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rct_chromatic_exact(
    g: *const RctGraph,
    colors: i64,
    out: *mut f64,
) -> RctStatus {
    guarded(|| {
        let (graph, slot) = match (unsafe { graph_ref(g) }, unsafe { out.as_mut() }) {
            (Some(graph), Some(slot)) => (graph, slot),
            _ => {
                set_error("null pointer argument");
                return RctStatus::NullPointer;
            }
        };
        match exact::chromatic_eval_f64(graph, colors) {
            Ok(v) => {
                *slot = v;
                RctStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact distribution function lambda(A) for the edge subset `edges`
/// (m <= 30).
///
/// # Safety
/// `g` must be a live handle; `edges` must point to `n_edges` readable
/// elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rct_lambda_exact(
    g: *const RctGraph,
    p: f64,
    q: f64,
    edges: *const usize,
    n_edges: usize,
    out: *mut f64,
) -> RctStatus {
    guarded(|| {
        let (graph, slot) = match (unsafe { graph_ref(g) }, unsafe { out.as_mut() }) {
            (Some(graph), Some(slot)) => (graph, slot),
            _ => {
                set_error("null pointer argument");
                return RctStatus::NullPointer;
            }
        };
        if n_edges > 0 && edges.is_null() {
            set_error("null edges pointer");
            return RctStatus::NullPointer;
        }
        let indices = unsafe { std::slice::from_raw_parts(edges, n_edges) };
        let subset = match EdgeSubset::from_indices(graph.edge_count(), indices) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        if let Err(e) = RCConfig::new(p, q) {
            return fail(e);
        }
        match exact::lambda_exact(graph, &p, &q, &subset) {
            Ok(v) => {
                *slot = v;
                RctStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

fn config_for(epsilon: f64, t: u64, seed: u64) -> Result<SamplerConfig, Error> {
    let mut cfg = SamplerConfig::new(epsilon, seed)?;
    if t > 0 {
        cfg = cfg.with_t(t);
    }
    Ok(cfg)
}

fn fill_estimate(slot: &mut RctEstimate, run: &sampler::EstimatorRun) {
    *slot = RctEstimate {
        estimate: run.estimate,
        mean: run.mean,
        variance: run.variance(),
        t: run.t,
        seed: run.seed_used,
    };
}

/// Percolation estimate of T_G(x, y); x > 1 and y > 1 required. Pass t = 0
/// to derive the sample count from the subdense variance bound at c = 1.
///
/// # Safety
/// `g` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rct_estimate_tutte(
    g: *const RctGraph,
    x: f64,
    y: f64,
    epsilon: f64,
    t: u64,
    seed: u64,
    out: *mut RctEstimate,
) -> RctStatus {
    guarded(|| {
        let (graph, slot) = match (unsafe { graph_ref(g) }, unsafe { out.as_mut() }) {
            (Some(graph), Some(slot)) => (graph, slot),
            _ => {
                set_error("null pointer argument");
                return RctStatus::NullPointer;
            }
        };
        let cfg = match config_for(epsilon, t, seed) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        match sampler::estimate_tutte(graph, &EvalPoint::new(x, y), &cfg) {
            Ok(run) => {
                fill_estimate(slot, &run);
                RctStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Percolation estimate of the partition function Z = E(Q^kappa(G_p)).
/// Pass t = 0 to derive the sample count from the subdense bound at c = 1.
///
/// # Safety
/// `g` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rct_estimate_z(
    g: *const RctGraph,
    p: f64,
    q: f64,
    epsilon: f64,
    t: u64,
    seed: u64,
    out: *mut RctEstimate,
) -> RctStatus {
    guarded(|| {
        let (graph, slot) = match (unsafe { graph_ref(g) }, unsafe { out.as_mut() }) {
            (Some(graph), Some(slot)) => (graph, slot),
            _ => {
                set_error("null pointer argument");
                return RctStatus::NullPointer;
            }
        };
        let rc = match RCConfig::new(p, q) {
            Ok(rc) => rc,
            Err(e) => return fail(e),
        };
        let cfg = match config_for(epsilon, t, seed) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        match sampler::estimate_z(graph, &rc, &cfg) {
            Ok(run) => {
                fill_estimate(slot, &run);
                RctStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Ratio estimate of lambda(A) = p^|A| Z_{G/A} / Z_G.
///
/// # Safety
/// `g` must be a live handle; `edges` must point to `n_edges` readable
/// elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rct_estimate_lambda(
    g: *const RctGraph,
    p: f64,
    q: f64,
    edges: *const usize,
    n_edges: usize,
    epsilon: f64,
    t: u64,
    seed: u64,
    out: *mut f64,
) -> RctStatus {
    guarded(|| {
        let (graph, slot) = match (unsafe { graph_ref(g) }, unsafe { out.as_mut() }) {
            (Some(graph), Some(slot)) => (graph, slot),
            _ => {
                set_error("null pointer argument");
                return RctStatus::NullPointer;
            }
        };
        if n_edges > 0 && edges.is_null() {
            set_error("null edges pointer");
            return RctStatus::NullPointer;
        }
        let indices = unsafe { std::slice::from_raw_parts(edges, n_edges) };
        let subset = match EdgeSubset::from_indices(graph.edge_count(), indices) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let rc = match RCConfig::new(p, q) {
            Ok(rc) => rc,
            Err(e) => return fail(e),
        };
        let cfg = match config_for(epsilon, t, seed) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        match sampler::estimate_lambda(graph, &rc, &subset, &cfg) {
            Ok(est) => {
                *slot = est.value;
                RctStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Draws an (alpha, beta) power-law multigraph. `dropped_copy_out` (nullable)
/// receives the vertex that lost one copy for parity, or -1.
///
/// # Safety
/// `out` must be valid; `dropped_copy_out` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn rct_generate_plg(
    alpha: f64,
    beta: f64,
    seed: u64,
    out: *mut *mut RctGraph,
    dropped_copy_out: *mut i64,
) -> RctStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return RctStatus::NullPointer;
        }
        let spec = match PLGSpec::new(alpha, beta) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match gen_plg(&spec, &mut rng) {
            Ok(plg) => {
                if let Some(slot) = unsafe { dropped_copy_out.as_mut() } {
                    *slot = plg.dropped_copy.map_or(-1, |v| v as i64);
                }
                emit_graph(out, plg.graph)
            }
            Err(e) => fail(e),
        }
    })
}

/// Generates a minimum-degree family instance on `n` vertices.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rct_generate_family(
    family: RctFamily,
    param: f64,
    n: usize,
    seed: u64,
    out: *mut *mut RctGraph,
) -> RctStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null out pointer");
            return RctStatus::NullPointer;
        }
        let family = match family {
            RctFamily::EpsDense => DensityFamily::EpsDense(param),
            RctFamily::Subdense => DensityFamily::Subdense(param),
            RctFamily::SuperdenseConst => DensityFamily::Superdense(SuperdenseFn::Const(param)),
            RctFamily::SuperdensePower => DensityFamily::Superdense(SuperdenseFn::Power(param)),
            RctFamily::SuperdenseNOverLogN => {
                DensityFamily::Superdense(SuperdenseFn::NOverLogN)
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match gen_family(&FamilySpec { family, n }, &mut rng) {
            Ok(g) => emit_graph(out, g),
            Err(e) => fail(e),
        }
    })
}
