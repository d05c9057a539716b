/* Copyright 2026 The dvec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the dvec embedding toolkit. All functions return 0 on
 * success and a dvec_status code otherwise; dvec_last_error() describes the
 * most recent failure on the calling thread. Handles are opaque and
 * single-owner.
 */

#ifndef DVEC_DVEC_H_
#define DVEC_DVEC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DVEC_BUILD_SHARED)
#define DVEC_API __declspec(dllexport)
#else
#define DVEC_API __declspec(dllimport)
#endif
#else
#define DVEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dvec_status {
  DVEC_OK = 0,
  DVEC_ERR_INVALID_ARGUMENT = 1,
  DVEC_ERR_IO = 2,
  DVEC_ERR_PARSE = 3,
  DVEC_ERR_DOMAIN = 4,
  DVEC_ERR_LOOKUP = 5,
  DVEC_ERR_FORMAT = 6,
  DVEC_ERR_INTERNAL = 7
} dvec_status;

DVEC_API const char* dvec_status_name(int status);

/* Message for the last failing call on this thread; empty string if none. */
DVEC_API const char* dvec_last_error(void);

DVEC_API const char* dvec_version(void);

/* ---- corpus pipeline ---------------------------------------------------- */

/* Copies input to output dropping repeated sentences (byte-identical lines
 * of tokens). exact != 0 keeps full sentence copies to rule out fingerprint
 * collisions. */
DVEC_API int dvec_dedup_file(const char* input_path, const char* output_path, int exact,
                             uint64_t* dropped_out);

/* Scores each input line under an add-one-smoothed unigram model trained on
 * lm_corpus_path (vocabulary pruned below lm_min_count) and keeps lines with
 * mean log probability >= threshold. */
DVEC_API int dvec_filter_file(const char* input_path, const char* output_path,
                              const char* lm_corpus_path, uint64_t lm_min_count,
                              double threshold, uint64_t* kept_out, uint64_t* dropped_out);

/* Counts tokens and writes "token<TAB>count" lines (descending) after a
 * "#total <n>" header, pruning counts below min_count. */
DVEC_API int dvec_vocab_file(const char* input_path, const char* output_path,
                             uint64_t min_count, uint64_t* vocab_size_out);

typedef struct dvec_phrase_options {
  uint32_t iterations;
  double delta;
  double keep_prob;
  /* Per-pass score cutoffs; beyond the list the last value keeps halving.
   * NULL means the default schedule {200}. */
  const double* thresholds;
  size_t threshold_count;
  char joiner;
  uint64_t seed;
} dvec_phrase_options;

DVEC_API void dvec_phrase_options_init(dvec_phrase_options* options);

/* Iterative high-mutual-information bigram merging. report_path (optional)
 * receives per-pass "left<TAB>right<TAB>score<TAB>count" lines. */
DVEC_API int dvec_phrases_file(const char* input_path, const char* output_path,
                               const char* report_path, const dvec_phrase_options* options,
                               uint64_t* merges_out);

/* ---- training and models ------------------------------------------------ */

typedef struct dvec_train_options {
  uint32_t dim;
  uint32_t window; /* context half-width */
  int use_position_weights;
  int use_subwords;
  uint32_t minn;
  uint32_t maxn;
  uint32_t buckets;
  uint32_t negatives;
  double lr0;
  uint32_t epochs;
  double subsample_t; /* 0 disables subsampling */
  double neg_power;
  uint32_t threads;
  uint64_t seed;
  int dynamic_window;
  uint64_t min_count; /* vocabulary pruning threshold */
} dvec_train_options;

DVEC_API void dvec_train_options_init(dvec_train_options* options);

typedef struct dvec_model dvec_model_t;

typedef void (*dvec_epoch_callback)(uint32_t epoch, double mean_loss, double tokens_per_sec,
                                    void* user_data);

/* Trains on corpus_path. vocab_path may name a saved vocabulary file; when
 * NULL the vocabulary is counted from the corpus. The callback, if any, runs
 * after every epoch. */
DVEC_API int dvec_train_file(const char* corpus_path, const char* vocab_path,
                             const dvec_train_options* options, dvec_epoch_callback on_epoch,
                             void* user_data, dvec_model_t** model_out);

DVEC_API int dvec_model_open(const char* path, dvec_model_t** model_out);

/* Loads a "<n> <dim>" text vector table as an evaluation-only model; saving
 * or exporting such a handle fails with DVEC_ERR_INVALID_ARGUMENT. */
DVEC_API int dvec_model_open_text(const char* path, dvec_model_t** model_out);

DVEC_API int dvec_model_save(dvec_model_t* model, const char* path);

/* Writes one "<token> <v1> ... <vd>" line per vocab word; with subwords the
 * values are the composed word + n-gram-mean vectors. */
DVEC_API int dvec_model_export_text(dvec_model_t* model, const char* path);

DVEC_API void dvec_model_free(dvec_model_t* model);

DVEC_API uint64_t dvec_model_vocab_size(const dvec_model_t* model);
DVEC_API uint32_t dvec_model_dim(const dvec_model_t* model);

/* ---- evaluation --------------------------------------------------------- */

typedef struct dvec_analogy_result {
  double semantic_accuracy;
  double syntactic_accuracy;
  double total_accuracy;
  uint64_t semantic_answered;
  uint64_t syntactic_answered;
  uint64_t oov;
} dvec_analogy_result;

/* questions_path follows the ": section" + 4-token-line convention. When
 * report_out is non-NULL it receives a malloc'd per-section text report;
 * free it with dvec_string_free. */
DVEC_API int dvec_eval_analogy(dvec_model_t* model, const char* questions_path, int lowercase,
                               dvec_analogy_result* result_out, char** report_out);

typedef struct dvec_similarity_result {
  double spearman;
  uint64_t scored;
  uint64_t skipped;
} dvec_similarity_result;

/* pairs_path holds "w1<TAB>w2<TAB>score" lines. Out-of-vocabulary words are
 * composed from subwords when the model has them, else the pair is skipped. */
DVEC_API int dvec_eval_similarity(dvec_model_t* model, const char* pairs_path, int lowercase,
                                  dvec_similarity_result* result_out);

typedef struct dvec_neighbors dvec_neighbors_t;

DVEC_API int dvec_nearest_neighbors(dvec_model_t* model, const char* query, size_t k,
                                    dvec_neighbors_t** neighbors_out);

DVEC_API size_t dvec_neighbors_count(const dvec_neighbors_t* neighbors);
DVEC_API const char* dvec_neighbors_token(const dvec_neighbors_t* neighbors, size_t index);
DVEC_API double dvec_neighbors_cosine(const dvec_neighbors_t* neighbors, size_t index);
DVEC_API void dvec_neighbors_free(dvec_neighbors_t* neighbors);

DVEC_API void dvec_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DVEC_DVEC_H_ */
