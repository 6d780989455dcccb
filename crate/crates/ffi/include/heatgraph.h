#ifndef HEATGRAPH_H
#define HEATGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum HgStatus {
  HG_STATUS_OK = 0,
  HG_STATUS_NULL_POINTER = 1,
  HG_STATUS_INVALID_ARGUMENT = 2,
  HG_STATUS_PARSE = 3,
  HG_STATUS_STRUCTURAL = 4,
  HG_STATUS_DOMAIN = 5,
  HG_STATUS_NO_CONVERGENCE = 6,
  HG_STATUS_EXPLORATION_LIMIT = 7,
  HG_STATUS_UNKNOWN_VERTEX = 8,
  HG_STATUS_IO = 9,
  HG_STATUS_BUFFER_TOO_SMALL = 10,
  HG_STATUS_PANIC = 11,
} HgStatus;

/**
 * A finitely supported vertex function, in increasing vertex order.
 */
typedef struct HgFunction HgFunction;

/**
 * A graph loaded from a spec string.
 */
typedef struct HgGraph HgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *hg_last_error_message(void);

/**
 * Builds a graph from `builtin:<name>[?k=v]` or `file:<path>`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string, `out` a valid pointer.
 */
enum HgStatus hg_graph_from_spec(const char *spec, struct HgGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `graph` must come from [`hg_graph_from_spec`] and not be used afterwards.
 */
void hg_graph_free(struct HgGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle, `out` a valid pointer.
 */
enum HgStatus hg_graph_root(const struct HgGraph *graph, uint64_t *out);

/**
 * # Safety
 * `graph` must be a live handle, `out` a valid pointer.
 */
enum HgStatus hg_graph_valence(const struct HgGraph *graph, uint64_t vertex, size_t *out);

/**
 * `p(t, x, y)` by exhaustion with balls around the graph root.
 *
 * # Safety
 * `graph` must be a live handle; `value` and `converged` valid pointers.
 */
enum HgStatus hg_kernel_estimate(const struct HgGraph *graph,
                                 double t,
                                 uint64_t x,
                                 uint64_t y,
                                 double tol,
                                 size_t max_radius,
                                 double *value,
                                 bool *converged);

/**
 * `Σ_y p(t, x, y)` by exhaustion with balls around the graph root.
 *
 * # Safety
 * `graph` must be a live handle; `mass` and `converged` valid pointers.
 */
enum HgStatus hg_completeness_estimate(const struct HgGraph *graph,
                                       double t,
                                       uint64_t x,
                                       double tol,
                                       size_t max_radius,
                                       double *mass,
                                       bool *converged);

/**
 * Minimum of `Δd(·, x0)` over the ball of `radius` around `x0`.
 *
 * # Safety
 * `graph` must be a live handle, `out` a valid pointer.
 */
enum HgStatus hg_curvature_min(const struct HgGraph *graph,
                               uint64_t x0,
                               size_t radius,
                               int64_t *out);

/**
 * Ascending Dirichlet eigenvalues of the ball of `radius` around `center`.
 *
 * `len` always receives the number of eigenvalues. If `capacity` is smaller
 * nothing is copied and the call returns `HG_STATUS_BUFFER_TOO_SMALL`, so
 * passing a null buffer with zero capacity queries the size.
 *
 * # Safety
 * `graph` must be a live handle, `len` a valid pointer and `values` valid
 * for `capacity` writes.
 */
enum HgStatus hg_spectrum(const struct HgGraph *graph,
                          uint64_t center,
                          size_t radius,
                          double *values,
                          size_t capacity,
                          size_t *len);

/**
 * Dirichlet evolution of `u0` (given as `len` vertex/value pairs) on the
 * ball of `radius` around the root.
 *
 * # Safety
 * `graph` must be a live handle, `vertices` and `values` valid for `len`
 * reads, `out` a valid pointer.
 */
enum HgStatus hg_evolve(const struct HgGraph *graph,
                        const uint64_t *vertices,
                        const double *values,
                        size_t len,
                        double t,
                        size_t radius,
                        struct HgFunction **out);

/**
 * # Safety
 * `f` must be a live handle, `out` a valid pointer.
 */
enum HgStatus hg_function_len(const struct HgFunction *f, size_t *out);

/**
 * Entry `index` in increasing vertex order.
 *
 * # Safety
 * `f` must be a live handle; `vertex` and `value` valid pointers.
 */
enum HgStatus hg_function_get(const struct HgFunction *f,
                              size_t index,
                              uint64_t *vertex,
                              double *value);

/**
 * Releases a function. Null is ignored.
 *
 * # Safety
 * `f` must come from [`hg_evolve`] and not be used afterwards.
 */
void hg_function_free(struct HgFunction *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEATGRAPH_H */
