#ifndef PSEUDOMETRIC_H
#define PSEUDOMETRIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum PmStatus {
  PM_STATUS_OK = 0,
  PM_STATUS_NULL_POINTER = 1,
  PM_STATUS_MALFORMED = 2,
  PM_STATUS_DIMENSION = 3,
  PM_STATUS_DOMAIN = 4,
  PM_STATUS_SAMPLING = 5,
  PM_STATUS_BUFFER_TOO_SMALL = 6,
  PM_STATUS_PANIC = 7,
} PmStatus;

/**
 * Opaque handle to a distance matrix.
 */
typedef struct PmMatrix PmMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next `pm_*` call on the same thread.
 */
const char *pm_last_error_message(void);

/**
 * Default absolute slack for triangle-inequality checks.
 */
double pm_default_tolerance(void);

/**
 * Creates a matrix from `n * n` row-major entries.
 *
 * # Safety
 * `entries` must point to `n * n` readable doubles (it may be NULL when
 * `n == 0`); `out` must be writable.
 */
enum PmStatus pm_matrix_new(size_t n, const double *entries, struct PmMatrix **out);

/**
 * Releases a matrix. NULL is ignored.
 *
 * # Safety
 * `m` must come from a `pm_*` constructor and not have been freed.
 */
void pm_matrix_free(struct PmMatrix *m);

/**
 * Number of points, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t pm_matrix_size(const struct PmMatrix *m);

/**
 * Copies the row-major entries into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `m` must be a live handle; `buf` must hold `len` writable doubles.
 */
enum PmStatus pm_matrix_copy_entries(const struct PmMatrix *m, double *buf, size_t len);

/**
 * Checks the pseudometric and metric axioms. `violation_count` may be
 * NULL.
 *
 * # Safety
 * `m` must be a live handle; output pointers must be writable.
 */
enum PmStatus pm_validate(const struct PmMatrix *m,
                          double tolerance_abs,
                          bool *is_pseudometric,
                          bool *is_metric,
                          size_t *violation_count);

/**
 * Largest absolute entrywise difference.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum PmStatus pm_sup_distance(const struct PmMatrix *a, const struct PmMatrix *b, double *out);

/**
 * Entrywise maximum with `base`, or with the discrete metric scaled by
 * `epsilon` when `base` is NULL.
 *
 * # Safety
 * `d` must be a live handle, `base` NULL or a live handle, `out` writable.
 */
enum PmStatus pm_densify(const struct PmMatrix *d,
                         double epsilon,
                         const struct PmMatrix *base,
                         double tolerance_abs,
                         struct PmMatrix **out);

/**
 * Extends the metric `subset` (placed at `indices`) to `full_n` points.
 *
 * # Safety
 * `subset`, `target` must be live handles; `indices` must hold
 * `index_count` readable values; `out` must be writable.
 */
enum PmStatus pm_extend(const struct PmMatrix *subset,
                        const size_t *indices,
                        size_t index_count,
                        size_t full_n,
                        const struct PmMatrix *target,
                        double cap,
                        double floor,
                        double tolerance_abs,
                        struct PmMatrix **out);

/**
 * `d` plus a metric bump of height `epsilon` across `(i, j)`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum PmStatus pm_perturb(const struct PmMatrix *d,
                         size_t i,
                         size_t j,
                         double epsilon,
                         double tolerance_abs,
                         struct PmMatrix **out);

/**
 * Family member for the `k` selector bits (each 0 or 1).
 *
 * # Safety
 * `bits` must hold `k` readable bytes; `out` must be writable.
 */
enum PmStatus pm_family_member(const uint8_t *bits, size_t k, struct PmMatrix **out);

/**
 * Random pseudometric from uniform chart coordinates.
 *
 * # Safety
 * `out` must be writable.
 */
enum PmStatus pm_sample(size_t n, uint64_t seed, bool metric_only, struct PmMatrix **out);

/**
 * `n(n-1)/2`: the number of chart coordinates for `n` points.
 */
size_t pm_chart_coordinate_count(size_t n);

/**
 * Natural chart coordinates, flattened level by level as
 * `s_2, s_3, u_3[0], s_4, u_4[0], u_4[1], ...` (`n(n-1)/2` values).
 *
 * # Safety
 * `d` must be a live handle; `coords` must hold `len` writable doubles.
 */
enum PmStatus pm_chart_encode_natural(const struct PmMatrix *d,
                                      double tolerance_abs,
                                      double *coords,
                                      size_t len);

/**
 * Inverse of [`pm_chart_encode_natural`].
 *
 * # Safety
 * `coords` must hold `len` readable doubles; `out` must be writable.
 */
enum PmStatus pm_chart_decode_natural(size_t n,
                                      const double *coords,
                                      size_t len,
                                      struct PmMatrix **out);

/**
 * Canonical chart point: `n(n-1)/2 - 1` closed coordinates into `closed`
 * and the half-open one into `half_open`. Needs `n >= 2`.
 *
 * # Safety
 * `d` must be a live handle; `closed` must hold `len` writable doubles;
 * `half_open` must be writable.
 */
enum PmStatus pm_chart_encode(const struct PmMatrix *d,
                              double tolerance_abs,
                              double *closed,
                              size_t len,
                              double *half_open);

/**
 * Pseudometric at a canonical chart point.
 *
 * # Safety
 * `closed` must hold `len` readable doubles; `out` must be writable.
 */
enum PmStatus pm_chart_decode(size_t n,
                              const double *closed,
                              size_t len,
                              double half_open,
                              struct PmMatrix **out);

/**
 * `[0,1)^2 -> [0,1] x [0,1)`.
 *
 * # Safety
 * `c`, `h` must be writable.
 */
enum PmStatus pm_square_pack(double a, double b, double *c, double *h);

/**
 * Inverse of [`pm_square_pack`].
 *
 * # Safety
 * `a`, `b` must be writable.
 */
enum PmStatus pm_square_unpack(double c, double h, double *a, double *b);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSEUDOMETRIC_H */
