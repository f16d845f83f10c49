#ifndef RCTUTTE_H
#define RCTUTTE_H

/* This file is generated by cbindgen from rctutte-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  RCT_STATUS_OK = 0,
  /**
   * File system failure.
   */
  RCT_STATUS_IO = 1,
  /**
   * Malformed graph text.
   */
  RCT_STATUS_PARSE = 2,
  /**
   * Violated precondition (evaluation domain, guards, infeasible specs).
   */
  RCT_STATUS_DOMAIN = 3,
  /**
   * A required pointer argument was null.
   */
  RCT_STATUS_NULL_POINTER = 4,
  /**
   * A path or string argument was not valid UTF-8.
   */
  RCT_STATUS_UTF8 = 5,
  /**
   * A panic was caught at the boundary.
   */
  RCT_STATUS_PANIC = 6,
} RctStatus;

/**
 * Graph families accepted by [`rct_generate_family`].
 */
typedef enum {
  /**
   * min degree >= param * n.
   */
  RCT_FAMILY_EPS_DENSE = 0,
  /**
   * min degree >= param * n / sqrt(ln n).
   */
  RCT_FAMILY_SUBDENSE = 1,
  /**
   * min degree >= n - param.
   */
  RCT_FAMILY_SUPERDENSE_CONST = 2,
  /**
   * min degree >= n - n^param (param < 1).
   */
  RCT_FAMILY_SUPERDENSE_POWER = 3,
  /**
   * min degree >= n - n / ln n (param ignored).
   */
  RCT_FAMILY_SUPERDENSE_N_OVER_LOG_N = 4,
} RctFamily;

/**
 * Opaque multigraph handle.
 */
typedef struct RctGraph RctGraph;

/**
 * Outcome of a sampling run.
 */
typedef struct {
  /**
   * zeta-scaled value in Tutte mode, the plain mean in Z mode.
   */
  double estimate;
  /**
   * Sample mean of Q^kappa.
   */
  double mean;
  /**
   * Unbiased sample variance.
   */
  double variance;
  /**
   * Samples taken.
   */
  uint64_t t;
  /**
   * Seed the run used (echoed).
   */
  uint64_t seed;
} RctEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *rct_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *rct_version(void);

/**
 * Builds a graph from `m` edges given as parallel endpoint arrays.
 *
 * # Safety
 * `us` and `vs` must point to `m` readable elements; `out` must be valid.
 */
RctStatus rct_graph_from_edges(uintptr_t n,
                               const uintptr_t *us,
                               const uintptr_t *vs,
                               uintptr_t m,
                               RctGraph **out);

/**
 * Complete simple graph K_n.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
RctStatus rct_graph_complete(uintptr_t n, RctGraph **out);

/**
 * Reads the graph text format ("n m" header, then one "u v" line per edge).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid.
 */
RctStatus rct_graph_read_file(const char *path, RctGraph **out);

/**
 * Writes the graph text format.
 *
 * # Safety
 * `g` must be a live handle from this library; `path` a NUL-terminated
 * string.
 */
RctStatus rct_graph_write_file(const RctGraph *g, const char *path);

/**
 * Vertex count; 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
uintptr_t rct_graph_vertex_count(const RctGraph *g);

/**
 * Edge count; 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
uintptr_t rct_graph_edge_count(const RctGraph *g);

/**
 * Minimum degree (loops count twice); 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
uintptr_t rct_graph_min_degree(const RctGraph *g);

/**
 * Releases a handle obtained from this library. Null is a no-op.
 *
 * # Safety
 * `g` must be a live handle from this library or null; it must not be used
 * afterwards.
 */
void rct_graph_free(RctGraph *g);

/**
 * Exact Tutte polynomial value by the 2^m state sum (m <= 30).
 *
 * # Safety
 * `g` must be a live handle; `out` a valid pointer.
 */
RctStatus rct_tutte_exact(const RctGraph *g, double x, double y, double *out);

/**
 * Exact random-cluster partition function (m <= 30).
 *
 * # Safety
 * `g` must be a live handle; `out` a valid pointer.
 */
RctStatus rct_z_exact(const RctGraph *g, double p, double q, double *out);

/**
 * Chromatic polynomial at an integer number of colors, as a double.
 *
 * # Safety
 * `g` must be a live handle; `out` a valid pointer.
 */
RctStatus rct_chromatic_exact(const RctGraph *g, int64_t colors, double *out);

/**
 * Exact distribution function lambda(A) for the edge subset `edges`
 * (m <= 30).
 *
 * # Safety
 * `g` must be a live handle; `edges` must point to `n_edges` readable
 * elements; `out` must be valid.
 */
RctStatus rct_lambda_exact(const RctGraph *g,
                           double p,
                           double q,
                           const uintptr_t *edges,
                           uintptr_t n_edges,
                           double *out);

/**
 * Percolation estimate of T_G(x, y); x > 1 and y > 1 required. Pass t = 0
 * to derive the sample count from the subdense variance bound at c = 1.
 *
 * # Safety
 * `g` must be a live handle; `out` a valid pointer.
 */
RctStatus rct_estimate_tutte(const RctGraph *g,
                             double x,
                             double y,
                             double epsilon,
                             uint64_t t,
                             uint64_t seed,
                             RctEstimate *out);

/**
 * Percolation estimate of the partition function Z = E(Q^kappa(G_p)).
 * Pass t = 0 to derive the sample count from the subdense bound at c = 1.
 *
 * # Safety
 * `g` must be a live handle; `out` a valid pointer.
 */
RctStatus rct_estimate_z(const RctGraph *g,
                         double p,
                         double q,
                         double epsilon,
                         uint64_t t,
                         uint64_t seed,
                         RctEstimate *out);

/**
 * Ratio estimate of lambda(A) = p^|A| Z_{G/A} / Z_G.
 *
 * # Safety
 * `g` must be a live handle; `edges` must point to `n_edges` readable
 * elements; `out` must be valid.
 */
RctStatus rct_estimate_lambda(const RctGraph *g,
                              double p,
                              double q,
                              const uintptr_t *edges,
                              uintptr_t n_edges,
                              double epsilon,
                              uint64_t t,
                              uint64_t seed,
                              double *out);

/**
 * Draws an (alpha, beta) power-law multigraph. `dropped_copy_out` (nullable)
 * receives the vertex that lost one copy for parity, or -1.
 *
 * # Safety
 * `out` must be valid; `dropped_copy_out` must be valid or null.
 */
RctStatus rct_generate_plg(double alpha,
                           double beta,
                           uint64_t seed,
                           RctGraph **out,
                           int64_t *dropped_copy_out);

/**
 * Generates a minimum-degree family instance on `n` vertices.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
RctStatus rct_generate_family(RctFamily family,
                              double param,
                              uintptr_t n,
                              uint64_t seed,
                              RctGraph **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RCTUTTE_H */
