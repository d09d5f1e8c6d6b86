#ifndef DIAMFLOW_H
#define DIAMFLOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DfStatus {
  DF_STATUS_OK = 0,
  DF_STATUS_NULL_POINTER = 1,
  DF_STATUS_INVALID_ARGUMENT = 2,
  DF_STATUS_DEGENERATE = 3,
  DF_STATUS_DOMAIN = 4,
  DF_STATUS_SOLVER_FAILURE = 5,
  DF_STATUS_IO = 6,
  DF_STATUS_PANIC = 7,
} DfStatus;

/*
 Opaque planar configuration.
 */
typedef struct DfConfiguration DfConfiguration;

/*
 Opaque push profile.
 */
typedef struct DfProfile DfProfile;

typedef struct DfBindingReport {
  double c_max;
  double c_upper;
  size_t binding_i;
  size_t binding_j;
  double binding_distance;
  double binding_angle;
  uint32_t iterations;
} DfBindingReport;

typedef struct DfQuadratureResult {
  double re;
  double im;
  double refinement_gap;
  size_t grid_size;
} DfQuadratureResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failure on this thread, or NULL. Owned by the library;
 valid until the next failing call on the same thread.
 */
const char *diamflow_last_error(void);

/*
 Static NUL-terminated version string.
 */
const char *diamflow_version(void);

struct DfProfile *diamflow_profile_linear(void);

struct DfProfile *diamflow_profile_cosine(void);

/*
 Piecewise-linear profile through `len` samples `(thetas[k], values[k])`.

 # Safety
 `thetas` and `values` must point to `len` readable doubles; `out` must be
 writable.
 */
enum DfStatus diamflow_profile_table(const double *thetas,
                                     const double *values,
                                     size_t len,
                                     struct DfProfile **out);

/*
 # Safety
 `profile` must be NULL or a handle from a `diamflow_profile_*` constructor
 that has not been freed.
 */
void diamflow_profile_free(struct DfProfile *profile);

/*
 Copy `len` points `(re[k], im[k])` into a new configuration.

 # Safety
 `re` and `im` must point to `len` readable doubles; `out` must be writable.
 */
enum DfStatus diamflow_config_new(const double *re,
                                  const double *im,
                                  size_t len,
                                  struct DfConfiguration **out);

/*
 # Safety
 `config` must be NULL or a live handle returned by this library.
 */
void diamflow_config_free(struct DfConfiguration *config);

/*
 Number of points, or 0 for NULL.

 # Safety
 `config` must be NULL or a live handle.
 */
size_t diamflow_config_len(const struct DfConfiguration *config);

/*
 Copy the points into caller buffers of capacity `cap` (at least the
 configuration length).

 # Safety
 `config` must be a live handle; `re` and `im` must be writable for `cap`
 doubles.
 */
enum DfStatus diamflow_config_points(const struct DfConfiguration *config,
                                     double *re,
                                     double *im,
                                     size_t cap);

/*
 # Safety
 `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum DfStatus diamflow_config_read(const char *path, struct DfConfiguration **out);

/*
 # Safety
 `config` must be a live handle; `path` a NUL-terminated UTF-8 string.
 */
enum DfStatus diamflow_config_write(const struct DfConfiguration *config, const char *path);

/*
 # Safety
 `out` must be writable.
 */
enum DfStatus diamflow_regular_ngon(size_t n, struct DfConfiguration **out);

/*
 # Safety
 `profile` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_push_construction(size_t n,
                                         double c,
                                         const struct DfProfile *profile,
                                         struct DfConfiguration **out);

/*
 # Safety
 `out` must be writable.
 */
enum DfStatus diamflow_single_diameter_move(size_t n, double eps, struct DfConfiguration **out);

/*
 # Safety
 `config` and `profile` must be live handles; `out` must be writable.
 */
enum DfStatus diamflow_flow_map(const struct DfConfiguration *config,
                                double t,
                                const struct DfProfile *profile,
                                struct DfConfiguration **out);

/*
 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_rescale_to_diameter(const struct DfConfiguration *config,
                                           double target,
                                           struct DfConfiguration **out);

/*
 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_diameter(const struct DfConfiguration *config, double *out);

/*
 `log Δ = 2 Σ_{i<j} ln|z_i − z_j|`.

 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_log_discriminant(const struct DfConfiguration *config, double *out);

/*
 `log Δ − n ln n`.

 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_log_ratio(const struct DfConfiguration *config, double *out);

/*
 `S_m = Σ_{i≠j} ρ_ij^m` for `m = 1..=max_power`, written to
 `re[m-1]`, `im[m-1]`.

 # Safety
 `config`, `profile` must be live handles; `re`, `im` writable for
 `max_power` doubles.
 */
enum DfStatus diamflow_power_sums(const struct DfConfiguration *config,
                                  const struct DfProfile *profile,
                                  size_t max_power,
                                  double *re,
                                  double *im);

/*
 `Σ_{i≠j} |ρ_ij|⁴ / (1 − |ρ_ij t|)⁴`.

 # Safety
 `config`, `profile` must be live handles; `out` must be writable.
 */
enum DfStatus diamflow_remainder_power_sum(const struct DfConfiguration *config,
                                           const struct DfProfile *profile,
                                           double t,
                                           double *out);

/*
 # Safety
 `profile` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_c_max(size_t n,
                             const struct DfProfile *profile,
                             double tol,
                             struct DfBindingReport *out);

/*
 # Safety
 `profile` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_t_max(size_t n, const struct DfProfile *profile, double tol, double *out);

/*
 # Safety
 `out` must be writable.
 */
enum DfStatus diamflow_eps_max(size_t n, double tol, double *out);

/*
 # Safety
 `profile` must be a live handle; `out` must be writable.
 */
enum DfStatus diamflow_integral(const struct DfProfile *profile,
                                size_t grid,
                                struct DfQuadratureResult *out);

/*
 `exp(−I π²/128)`.
 */
double diamflow_limit_constant(double i_real);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIAMFLOW_H */
