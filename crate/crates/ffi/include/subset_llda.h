#ifndef SUBSET_LLDA_H
#define SUBSET_LLDA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Prediction methods.
 */
typedef enum SlldaMethod {
  SLLDA_METHOD_LLDA = 0,
  SLLDA_METHOD_PRIOR = 1,
  SLLDA_METHOD_DEP = 2,
  SLLDA_METHOD_SUBSET = 3,
} SlldaMethod;

/**
 * Status codes returned by fallible calls.
 */
typedef enum SlldaStatus {
  SLLDA_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SLLDA_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SLLDA_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad configuration or option value.
   */
  SLLDA_STATUS_CONFIG = 3,
  SLLDA_STATUS_IO = 4,
  /**
   * Malformed input file or out-of-range identifier.
   */
  SLLDA_STATUS_PARSE = 5,
  /**
   * Inconsistent dimensions or a corrupt model.
   */
  SLLDA_STATUS_MODEL = 6,
  /**
   * A document had no allowed labels.
   */
  SLLDA_STATUS_EMPTY_ALLOWED = 7,
  /**
   * Index out of range in an accessor.
   */
  SLLDA_STATUS_OUT_OF_RANGE = 8,
  SLLDA_STATUS_PANIC = 9,
} SlldaStatus;

/**
 * Opaque corpus handle.
 */
typedef struct SlldaCorpus SlldaCorpus;

/**
 * Opaque model handle: LLDA statistics plus the optional Dep-LDA model.
 */
typedef struct SlldaModel SlldaModel;

/**
 * Opaque handle to per-document label rankings.
 */
typedef struct SlldaScores SlldaScores;

/**
 * Gibbs schedule and seed shared by training and prediction.
 */
typedef struct SlldaSchedule {
  uintptr_t iterations;
  uintptr_t burn_in;
  uintptr_t lag;
  uintptr_t chains;
  uint64_t seed;
} SlldaSchedule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Schedule used by default for training and prediction.
 */
struct SlldaSchedule sllda_default_schedule(void);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call on this thread.
 */
const char *sllda_last_error(void);

/**
 * Load a corpus file. `is_test` selects test-role loading, which keeps
 * documents without labels.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SlldaStatus sllda_corpus_load(const char *path, bool is_test, struct SlldaCorpus **out);

/**
 * # Safety
 * `corpus` must come from [`sllda_corpus_load`] or be null.
 */
uintptr_t sllda_corpus_num_documents(const struct SlldaCorpus *corpus);

/**
 * # Safety
 * `corpus` must come from [`sllda_corpus_load`] or be null.
 */
uintptr_t sllda_corpus_num_labels(const struct SlldaCorpus *corpus);

/**
 * # Safety
 * `corpus` must come from [`sllda_corpus_load`] or be null.
 */
uintptr_t sllda_corpus_num_features(const struct SlldaCorpus *corpus);

/**
 * # Safety
 * `corpus` must come from [`sllda_corpus_load`] or be null; it is invalid afterwards.
 */
void sllda_corpus_free(struct SlldaCorpus *corpus);

/**
 * Train LLDA with symmetric α = `alpha_sum / L` and the given β. When
 * `with_aux` is set the Dep-LDA auxiliary model is trained as well, with
 * default settings.
 *
 * # Safety
 * `train` must be a live corpus handle, `schedule` and `out` valid pointers.
 */
enum SlldaStatus sllda_model_train(const struct SlldaCorpus *train,
                                   const struct SlldaSchedule *schedule,
                                   double alpha_sum,
                                   double beta,
                                   bool with_aux,
                                   struct SlldaModel **out);

/**
 * # Safety
 * `model` must be a live handle and `dir` a NUL-terminated string.
 */
enum SlldaStatus sllda_model_save(const struct SlldaModel *model, const char *dir);

/**
 * # Safety
 * `dir` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SlldaStatus sllda_model_load(const char *dir, struct SlldaModel **out);

/**
 * # Safety
 * `model` must be a live handle or null.
 */
uintptr_t sllda_model_num_labels(const struct SlldaModel *model);

/**
 * # Safety
 * `model` must be a live handle or null.
 */
bool sllda_model_has_aux(const struct SlldaModel *model);

/**
 * # Safety
 * `model` must be a live handle or null; it is invalid afterwards.
 */
void sllda_model_free(struct SlldaModel *model);

/**
 * Score every document of `test`. `train` is required for
 * [`SlldaMethod::Subset`] and ignored otherwise. A negative `eta` selects
 * the method default.
 *
 * # Safety
 * Handles must be live (`train` may be null), `schedule` and `out` valid.
 */
enum SlldaStatus sllda_predict(const struct SlldaModel *model,
                               const struct SlldaCorpus *test,
                               const struct SlldaCorpus *train,
                               enum SlldaMethod method,
                               const struct SlldaSchedule *schedule,
                               double eta,
                               struct SlldaScores **out);

/**
 * # Safety
 * `scores` must be a live handle or null.
 */
uintptr_t sllda_scores_num_documents(const struct SlldaScores *scores);

/**
 * Number of ranked labels of document `doc`, or 0 when out of range.
 *
 * # Safety
 * `scores` must be a live handle or null.
 */
uintptr_t sllda_scores_num_ranked(const struct SlldaScores *scores, uintptr_t doc);

/**
 * Label and score at position `rank` (0 = best) of document `doc`.
 *
 * # Safety
 * `scores` must be a live handle; `label` and `score` valid pointers.
 */
enum SlldaStatus sllda_scores_get(const struct SlldaScores *scores,
                                  uintptr_t doc,
                                  uintptr_t rank,
                                  uint32_t *label,
                                  double *score);

/**
 * # Safety
 * `scores` must be a live handle or null; it is invalid afterwards.
 */
void sllda_scores_free(struct SlldaScores *scores);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBSET_LLDA_H */
