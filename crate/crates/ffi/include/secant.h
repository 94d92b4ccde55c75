#ifndef SECANT_H
#define SECANT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SecantBackend {
  SECANT_BACKEND_EXACT = 0,
  SECANT_BACKEND_FLOAT = 1,
} SecantBackend;

typedef enum SecantCellStatus {
  SECANT_CELL_STATUS_CERTIFIED_NONDEFECTIVE = 0,
  SECANT_CELL_STATUS_PROBABLE_NONDEFECTIVE = 1,
  SECANT_CELL_STATUS_CANDIDATE_DEFECTIVE = 2,
  SECANT_CELL_STATUS_ORACLE_CONFIRMED_DEFECTIVE = 3,
} SecantCellStatus;

typedef enum SecantStatus {
  SECANT_STATUS_OK = 0,
  SECANT_STATUS_NULL_POINTER = 1,
  SECANT_STATUS_INVALID_CONFIG = 2,
  SECANT_STATUS_OUT_OF_RANGE = 3,
  SECANT_STATUS_SHAPE = 4,
  SECANT_STATUS_DEGENERATE_SAMPLE = 5,
  SECANT_STATUS_NON_FINITE = 6,
  SECANT_STATUS_REGISTRY_CONTRADICTION = 7,
  SECANT_STATUS_PARSE = 8,
  SECANT_STATUS_IO = 9,
  SECANT_STATUS_PANIC = 10,
} SecantStatus;

/**
 * Rank backend settings.
 */
typedef struct SecantConfig SecantConfig;

/**
 * Records produced by [`secant_scan_range`].
 */
typedef struct SecantScan SecantScan;

/**
 * One classified cell. `prime` is 0 for the float backend.
 */
typedef struct SecantRecord {
  size_t n;
  size_t k;
  size_t s;
  size_t ambient;
  size_t saturation;
  size_t expected_dim;
  size_t computed_dim;
  size_t defect;
  enum SecantCellStatus status;
  enum SecantBackend backend;
  uint32_t prime;
  uint64_t seed;
  size_t trials;
} SecantRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *secant_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *secant_version(void);

/**
 * `C(a, b)`.
 */
uint64_t secant_binomial(uint64_t a, uint64_t b);

/**
 * `C(n+1, k+1) - 1`; requires `k < n`, returns 0 otherwise.
 */
size_t secant_ambient_dim(size_t k, size_t n);

/**
 * Expected dimension of `G(k, n)^s`; requires `k < n`, returns 0 otherwise.
 */
size_t secant_expected_dim(size_t k, size_t n, size_t s);

/**
 * Saturation bound `S`; requires `k < n`, returns 0 otherwise.
 */
size_t secant_saturation_s(size_t k, size_t n);

/**
 * Dimension of `G(1, n)^s`.
 */
size_t secant_lines_oracle(size_t n, size_t s);

/**
 * New configuration with the library defaults for `backend`.
 */
struct SecantConfig *secant_config_new(enum SecantBackend backend, uint64_t seed);

/**
 * # Safety
 * `cfg` must be NULL or a pointer from [`secant_config_new`] not yet freed.
 */
void secant_config_free(struct SecantConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live configuration handle.
 */
enum SecantStatus secant_config_set_trials(struct SecantConfig *cfg, size_t trials);

/**
 * Sets the modulus; it must be a prime in `[2^30, 2^31)`.
 *
 * # Safety
 * `cfg` must be a live configuration handle.
 */
enum SecantStatus secant_config_set_prime(struct SecantConfig *cfg, uint32_t prime);

/**
 * # Safety
 * `cfg` must be a live configuration handle.
 */
enum SecantStatus secant_config_set_tolerance(struct SecantConfig *cfg, double tolerance);

/**
 * # Safety
 * `cfg` must be a live configuration handle.
 */
enum SecantStatus secant_config_set_vary_prime(struct SecantConfig *cfg, bool vary);

/**
 * Classifies `G(k, n)^s`.
 *
 * # Safety
 * `cfg` must be a live configuration handle and `out` writable.
 */
enum SecantStatus secant_classify_cell(const struct SecantConfig *cfg,
                                       size_t k,
                                       size_t n,
                                       size_t s,
                                       struct SecantRecord *out);

/**
 * Classifies the `s`-secant variety of the degree-`k` Veronese embedding
 * of `P^n`.
 *
 * # Safety
 * `cfg` must be a live configuration handle and `out` writable.
 */
enum SecantStatus secant_veronese_classify(const struct SecantConfig *cfg,
                                           size_t k,
                                           size_t n,
                                           size_t s,
                                           struct SecantRecord *out);

/**
 * Sweeps `n_min <= n <= n_max` with the default `k` range, or
 * `k <= k_max` when `k_max` is nonzero. On success `*out` receives a handle
 * to free with [`secant_scan_free`].
 *
 * # Safety
 * `cfg` must be a live configuration handle and `out` writable.
 */
enum SecantStatus secant_scan_range(const struct SecantConfig *cfg,
                                    size_t n_min,
                                    size_t n_max,
                                    size_t k_max,
                                    struct SecantScan **out);

/**
 * Number of records in a scan; 0 for NULL.
 *
 * # Safety
 * `scan` must be NULL or a live scan handle.
 */
size_t secant_scan_len(const struct SecantScan *scan);

/**
 * Copies record `index` into `out`.
 *
 * # Safety
 * `scan` must be a live scan handle and `out` writable.
 */
enum SecantStatus secant_scan_get(const struct SecantScan *scan,
                                  size_t index,
                                  struct SecantRecord *out);

/**
 * # Safety
 * `scan` must be NULL or a handle from [`secant_scan_range`] not yet freed.
 */
void secant_scan_free(struct SecantScan *scan);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SECANT_H */
