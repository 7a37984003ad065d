/* C interface for the ped subdata selection library. */

#ifndef PED_H
#define PED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum PedStatus {
  PED_STATUS_OK = 0,
  PED_STATUS_NULL_POINTER = 1,
  PED_STATUS_UTF8_ERROR = 2,
  PED_STATUS_INVALID_ARGUMENT = 3,
  PED_STATUS_PARSE_ERROR = 4,
  PED_STATUS_IO_ERROR = 5,
  PED_STATUS_INFEASIBLE = 6,
  PED_STATUS_RUNTIME_ERROR = 7,
  PED_STATUS_PANIC = 8,
} PedStatus;

/**
 * Opaque dataset handle.
 */
typedef struct PedDataset PedDataset;

/**
 * Opaque fitted random-forest handle.
 */
typedef struct PedForest PedForest;

/**
 * Tuning parameters for `ped_select`; zero fields take the documented
 * defaults.
 */
typedef struct PedSelectOptions {
  uintptr_t t_s;
  uintptr_t t_d;
  uintptr_t t_n;
  uintptr_t t_h;
  uintptr_t eval_cap;
} PedSelectOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ped_version(void);

/**
 * Message for the most recent error on this thread; valid until the next
 * failing call on the same thread.
 */
const char *ped_last_error_message(void);

/**
 * Generate a synthetic dataset. `p` = 0 uses the family default dimension.
 *
 * # Safety
 * `family` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum PedStatus ped_dataset_generate(const char *family,
                                    uintptr_t p,
                                    uintptr_t n_rows,
                                    uint64_t seed,
                                    struct PedDataset **out);

/**
 * Load a CSV with a header row. `categorical` may be NULL or a
 * comma-separated list of column names.
 *
 * # Safety
 * Pointer arguments must be valid; see [`ped_dataset_generate`].
 */
enum PedStatus ped_dataset_load_csv(const char *path,
                                    const char *target,
                                    const char *categorical,
                                    struct PedDataset **out);

/**
 * Write the dataset (all rows) as CSV plus its metadata sidecar.
 *
 * # Safety
 * `dataset` must be a live handle; `path` a valid string.
 */
enum PedStatus ped_dataset_write_csv(const struct PedDataset *dataset, const char *path);

/**
 * # Safety
 * `dataset` must come from this library and not have been freed.
 */
void ped_dataset_free(struct PedDataset *dataset);

/**
 * # Safety
 * `dataset` must be a live handle (NULL returns 0).
 */
uintptr_t ped_dataset_n_rows(const struct PedDataset *dataset);

/**
 * # Safety
 * `dataset` must be a live handle (NULL returns 0).
 */
uintptr_t ped_dataset_n_features(const struct PedDataset *dataset);

/**
 * # Safety
 * `dataset` must be a live handle (NULL returns 0).
 */
uintptr_t ped_dataset_n_classes(const struct PedDataset *dataset);

/**
 * Select `n` rows by `method` ("ped", "uniform", or "twinning") and write
 * their indices into `out_indices` (capacity `n`).
 *
 * # Safety
 * `dataset` must be live, `method` a valid string, `out_indices` writable
 * for `n` elements. `options` may be NULL.
 */
enum PedStatus ped_select(const struct PedDataset *dataset,
                          const char *method,
                          uintptr_t n,
                          uint64_t seed,
                          const struct PedSelectOptions *options,
                          uint64_t *out_indices);

/**
 * Fit a random forest on the rows listed in `rows` (NULL means all rows).
 * `ntree` = 0 uses the default of 100.
 *
 * # Safety
 * `dataset` must be live; `rows`, when non-NULL, must hold `n_rows` valid
 * row indices; `out` must be a valid pointer.
 */
enum PedStatus ped_forest_fit(const struct PedDataset *dataset,
                              const uint64_t *rows,
                              uintptr_t n_rows,
                              uint32_t ntree,
                              uint64_t seed,
                              struct PedForest **out);

/**
 * # Safety
 * `forest` must come from this library and not have been freed.
 */
void ped_forest_free(struct PedForest *forest);

/**
 * Predicted class ids for every row of `test`, written to `out_classes`
 * (capacity = row count of `test`).
 *
 * # Safety
 * Both handles must be live and `out_classes` writable for the test row
 * count.
 */
enum PedStatus ped_forest_predict(const struct PedForest *forest,
                                  const struct PedDataset *test,
                                  uint32_t *out_classes);

/**
 * Accuracy and AUC of the forest on a labeled test set.
 *
 * # Safety
 * Handles must be live; output pointers may be NULL to skip a metric.
 */
enum PedStatus ped_forest_evaluate(const struct PedForest *forest,
                                   const struct PedDataset *test,
                                   double *out_accuracy,
                                   double *out_auc);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PED_H */
