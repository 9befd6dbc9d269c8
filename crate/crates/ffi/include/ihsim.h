#ifndef IHSIM_H
#define IHSIM_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum IhsimStatus {
  IHSIM_STATUS_OK = 0,
  IHSIM_STATUS_NULL_POINTER = 1,
  IHSIM_STATUS_INVALID_ARGUMENT = 2,
  IHSIM_STATUS_RUN_FAILED = 3,
  IHSIM_STATUS_IO_FAILED = 4,
} IhsimStatus;

/**
 * Network family selector for the C API.
 */
typedef enum IhsimNetworkKind {
  /**
   * `param1` = degree.
   */
  IHSIM_NETWORK_KIND_EGALITARIAN = 0,
  /**
   * `param1` = edges per new node, `param2` = preferential probability.
   */
  IHSIM_NETWORK_KIND_BARABASI_ALBERT = 1,
  /**
   * `param1` = ring degree (even), `param2` = rewiring probability.
   */
  IHSIM_NETWORK_KIND_WATTS_STROGATZ = 2,
  IHSIM_NETWORK_KIND_STAR = 3,
} IhsimNetworkKind;

/**
 * Opaque experiment configuration handle.
 */
typedef struct IhsimConfig IhsimConfig;

/**
 * Opaque generated-network handle.
 */
typedef struct IhsimNetwork IhsimNetwork;

/**
 * Opaque result-set handle.
 */
typedef struct IhsimResults IhsimResults;

/**
 * Numeric view of one result row. Optional metrics are NaN when the
 * matching `has_*` flag is false.
 */
typedef struct IhsimRowData {
  uintptr_t replication;
  /**
   * 0 = control, 1 = treatment.
   */
  int32_t condition;
  uintptr_t round;
  double mean_error;
  double collective_sqe;
  double individual_sqe;
  double predictive_diversity;
  double polarization;
  double revision_coefficient;
  bool has_polarization;
  bool has_revision_coefficient;
} IhsimRowData;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *ihsim_version(void);

/**
 * Message of the calling thread's most recent failure, or null. The
 * caller owns the returned string and must release it with
 * [`ihsim_string_free`].
 */
char *ihsim_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a function of this library and not yet
 * freed; null is ignored.
 */
void ihsim_string_free(char *s);

/**
 * New configuration with the library defaults (synthetic party-labeled
 * dataset, egalitarian d=4, 100 replications, 3 rounds, seed 42).
 */
struct IhsimConfig *ihsim_config_new(void);

/**
 * Parse a config file (key = value lines) into a new handle; null on
 * error.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string or null.
 */
struct IhsimConfig *ihsim_config_from_file(const char *path);

/**
 * # Safety
 * `config` must be a live handle from this library or null.
 */
void ihsim_config_free(struct IhsimConfig *config);

/**
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_seed(struct IhsimConfig *config, uint64_t seed);

/**
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_replications(struct IhsimConfig *config, uintptr_t replications);

/**
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_rounds(struct IhsimConfig *config, uintptr_t rounds);

/**
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_treatment_fraction(struct IhsimConfig *config, double fraction);

/**
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_homophily(struct IhsimConfig *config, bool enabled);

/**
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_network(struct IhsimConfig *config,
                                          enum IhsimNetworkKind kind,
                                          double param1,
                                          double param2);

/**
 * Point the configuration at a dataset CSV.
 *
 * # Safety
 * `config` must be a live handle; `path` a valid NUL-terminated string.
 */
enum IhsimStatus ihsim_config_set_dataset_path(struct IhsimConfig *config, const char *path);

/**
 * Use a synthetic dataset of `questions` x `respondents`, with or without
 * party labels.
 *
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_synthetic(struct IhsimConfig *config,
                                            uintptr_t questions,
                                            uintptr_t respondents,
                                            bool party_labels);

/**
 * Set one arm's modulation coefficients: evidence intercept/slope, then
 * homophily intercept/slope.
 *
 * # Safety
 * `config` must be a live configuration handle.
 */
enum IhsimStatus ihsim_config_set_coefficients(struct IhsimConfig *config,
                                               bool treatment_arm,
                                               double evidence_intercept,
                                               double evidence_slope,
                                               double homophily_intercept,
                                               double homophily_slope);

/**
 * Run the experiment and write `results.csv`, `agents.csv` and
 * `manifest.txt` into `out_dir`.
 *
 * # Safety
 * `config` must be a live handle; `out_dir` a valid NUL-terminated string.
 */
enum IhsimStatus ihsim_run_to_dir(const struct IhsimConfig *config, const char *out_dir);

/**
 * Run the experiment and keep the rows in memory; null on error.
 *
 * # Safety
 * `config` must be a live configuration handle.
 */
struct IhsimResults *ihsim_run(const struct IhsimConfig *config);

/**
 * # Safety
 * `results` must be a live handle from this library or null.
 */
void ihsim_results_free(struct IhsimResults *results);

/**
 * # Safety
 * `results` must be a live results handle.
 */
uintptr_t ihsim_results_row_count(const struct IhsimResults *results);

/**
 * Copy row `index` into `out`.
 *
 * # Safety
 * `results` must be a live handle; `out` a valid pointer.
 */
enum IhsimStatus ihsim_results_row(const struct IhsimResults *results,
                                   uintptr_t index,
                                   struct IhsimRowData *out);

/**
 * Question id of row `index` as a new string (release with
 * [`ihsim_string_free`]); null on error.
 *
 * # Safety
 * `results` must be a live results handle.
 */
char *ihsim_results_question_id(const struct IhsimResults *results, uintptr_t index);

/**
 * Generate a connected network; null on error.
 */
struct IhsimNetwork *ihsim_network_generate(enum IhsimNetworkKind kind,
                                            double param1,
                                            double param2,
                                            uintptr_t node_count,
                                            uint64_t seed);

/**
 * # Safety
 * `network` must be a live handle from this library or null.
 */
void ihsim_network_free(struct IhsimNetwork *network);

/**
 * # Safety
 * `network` must be a live network handle.
 */
uintptr_t ihsim_network_node_count(const struct IhsimNetwork *network);

/**
 * # Safety
 * `network` must be a live network handle.
 */
uintptr_t ihsim_network_edge_count(const struct IhsimNetwork *network);

/**
 * Degree of `node`, or -1 when the handle or index is invalid.
 *
 * # Safety
 * `network` must be a live network handle.
 */
intptr_t ihsim_network_degree(const struct IhsimNetwork *network, uintptr_t node);

/**
 * Write the edge list (`u v` per line, 0-based) to `path`.
 *
 * # Safety
 * `network` must be a live handle; `path` a valid NUL-terminated string.
 */
enum IhsimStatus ihsim_network_write_edge_list(const struct IhsimNetwork *network,
                                               const char *path);

/**
 * Generate a synthetic calibration dataset and write it as CSV.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string.
 */
enum IhsimStatus ihsim_generate_dataset_csv(uintptr_t questions,
                                            uintptr_t respondents,
                                            double dispersion,
                                            bool party_labels,
                                            bool with_alpha0,
                                            uint64_t seed,
                                            const char *path);

/**
 * One weighted-averaging update.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IhsimStatus ihsim_degroot_step(double own, double neighbor_mean, double alpha, double *out);

/**
 * Modulated, clipped self-weight. Pass `has_homophily = false` to zero
 * the homophily term.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IhsimStatus ihsim_modulate_self_weight(double alpha0,
                                            double own_evidence,
                                            double neighbor_mean_evidence,
                                            bool has_homophily,
                                            double homophily_fraction,
                                            double evidence_intercept,
                                            double evidence_slope,
                                            double homophily_intercept,
                                            double homophily_slope,
                                            double *out);

/**
 * Normalized distance of one estimate from the truth.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum IhsimStatus ihsim_individual_error(double estimate,
                                        double true_value,
                                        double baseline_sd,
                                        double *out);

/**
 * Mean normalized cross-party distance.
 *
 * # Safety
 * Array pointers must reference at least the stated lengths; `out` must
 * be valid.
 */
enum IhsimStatus ihsim_polarization(const double *dem,
                                    uintptr_t dem_len,
                                    const double *rep,
                                    uintptr_t rep_len,
                                    double true_value,
                                    double baseline_sd,
                                    double *out);

/**
 * Partial correlation of initial errors and revisions, controlling for
 * social signals.
 *
 * # Safety
 * The three arrays must each hold `len` values; `out` must be valid.
 */
enum IhsimStatus ihsim_revision_coefficient(const double *initial_errors,
                                            const double *revisions,
                                            const double *social_signals,
                                            uintptr_t len,
                                            double *out);

/**
 * Collective squared error, mean individual squared error and predictive
 * diversity of a set of estimates.
 *
 * # Safety
 * `estimates` must hold `len` values; the three out pointers must be
 * valid.
 */
enum IhsimStatus ihsim_dpt_decompose(const double *estimates,
                                     uintptr_t len,
                                     double true_value,
                                     double *collective_sqe,
                                     double *individual_sqe,
                                     double *predictive_diversity);

/**
 * Product-moment correlation.
 *
 * # Safety
 * `x` and `y` must each hold `len` values; `out` must be valid.
 */
enum IhsimStatus ihsim_pearson(const double *x, const double *y, uintptr_t len, double *out);

/**
 * Two-sided paired permutation test of mean(treatment - control).
 *
 * # Safety
 * `control` and `treatment` must each hold `n_pairs` values; the out
 * pointers must be valid.
 */
enum IhsimStatus ihsim_paired_permutation_test(const double *control,
                                               const double *treatment,
                                               uintptr_t n_pairs,
                                               uintptr_t n_resamples,
                                               uint64_t seed,
                                               double *mean_difference,
                                               double *p_value);

/**
 * Percentile bootstrap interval for the mean.
 *
 * # Safety
 * `values` must hold `len` values; the out pointers must be valid.
 */
enum IhsimStatus ihsim_bootstrap_mean_ci(const double *values,
                                         uintptr_t len,
                                         uintptr_t n_resamples,
                                         double level,
                                         uint64_t seed,
                                         double *ci_low,
                                         double *ci_high);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IHSIM_H */
