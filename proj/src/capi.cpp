// Copyright 2026 The dvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dvec/dvec.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "corpus.h"
#include "eval.h"
#include "model.h"
#include "phrases.h"
#include "token_stream.h"
#include "trainer.h"
#include "vecio.h"

// Owns either a full trained model or an evaluation-only text vector table.
// The VectorSet is built lazily and borrows the model, which lives as long
// as the handle. Handles are not safe for concurrent use.
struct dvec_model {
  std::optional<dvec::Model> model;
  std::optional<dvec::VectorSet> vectors;

  const dvec::VectorSet& vector_set() {
    if (!vectors) {
      vectors.emplace(
          dvec::VectorSet::from_model(model->vocab, model->config, model->embeddings));
    }
    return *vectors;
  }
};

struct dvec_neighbors {
  std::vector<dvec::Neighbor> items;
};

namespace {

thread_local std::string t_last_error;

template <typename Fn>
int guarded(Fn&& fn) noexcept {
  try {
    fn();
    t_last_error.clear();
    return DVEC_OK;
  } catch (const dvec::Error& e) {
    t_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return DVEC_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return DVEC_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) dvec::fail(dvec::ErrorCode::invalid_argument, what);
}

dvec::PhraseConfig to_phrase_config(const dvec_phrase_options* options) {
  dvec::PhraseConfig config;
  if (options == nullptr) return config;
  config.iterations = options->iterations;
  config.delta = options->delta;
  config.keep_prob = options->keep_prob;
  config.joiner = options->joiner;
  if (options->thresholds != nullptr && options->threshold_count > 0)
    config.thresholds.assign(options->thresholds,
                             options->thresholds + options->threshold_count);
  config.validate();
  return config;
}

void split_options(const dvec_train_options& options, dvec::ModelConfig& mc,
                   dvec::TrainConfig& tc) {
  mc.dim = options.dim;
  mc.window = options.window;
  mc.use_position_weights = options.use_position_weights != 0;
  mc.use_subwords = options.use_subwords != 0;
  mc.minn = options.minn;
  mc.maxn = options.maxn;
  mc.buckets = options.buckets;
  mc.negatives = options.negatives;
  tc.lr0 = options.lr0;
  tc.epochs = options.epochs;
  tc.subsample_t = options.subsample_t;
  tc.negatives = options.negatives;
  tc.neg_power = options.neg_power;
  tc.threads = options.threads;
  tc.seed = options.seed;
  tc.dynamic_window = options.dynamic_window != 0;
  mc.validate();
  tc.validate();
}

}  // namespace

extern "C" {

const char* dvec_status_name(int status) {
  switch (status) {
    case DVEC_OK: return "ok";
    case DVEC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DVEC_ERR_IO: return "io error";
    case DVEC_ERR_PARSE: return "parse error";
    case DVEC_ERR_DOMAIN: return "domain error";
    case DVEC_ERR_LOOKUP: return "lookup error";
    case DVEC_ERR_FORMAT: return "format error";
    case DVEC_ERR_INTERNAL: return "internal error";
    default: return "unknown status";
  }
}

const char* dvec_last_error(void) { return t_last_error.c_str(); }

const char* dvec_version(void) { return "0.1.0"; }

int dvec_dedup_file(const char* input_path, const char* output_path, int exact,
                    uint64_t* dropped_out) {
  return guarded([&] {
    require(input_path && output_path, "null path");
    dvec::FileTokenStream in(input_path);
    dvec::SentenceWriter out(output_path);
    uint64_t dropped =
        dvec::dedup_sentences(in, [&](const dvec::Sentence& s) { out.write(s); }, exact != 0);
    out.close();
    if (dropped_out) *dropped_out = dropped;
  });
}

int dvec_filter_file(const char* input_path, const char* output_path,
                     const char* lm_corpus_path, uint64_t lm_min_count, double threshold,
                     uint64_t* kept_out, uint64_t* dropped_out) {
  return guarded([&] {
    require(input_path && output_path && lm_corpus_path, "null path");
    dvec::FileTokenStream lm_stream(lm_corpus_path);
    dvec::Vocab vocab = dvec::Vocab::build(lm_stream, lm_min_count);
    lm_stream.reset();
    dvec::UnigramLM lm = dvec::UnigramLM::train(lm_stream, vocab);

    dvec::FileTokenStream in(input_path);
    dvec::SentenceWriter out(output_path);
    uint64_t kept = 0, dropped = 0;
    dvec::Sentence sentence;
    while (in.next(sentence)) {
      if (lm.filter(sentence, threshold).keep) {
        out.write(sentence);
        kept++;
      } else {
        dropped++;
      }
    }
    out.close();
    if (kept_out) *kept_out = kept;
    if (dropped_out) *dropped_out = dropped;
  });
}

int dvec_vocab_file(const char* input_path, const char* output_path, uint64_t min_count,
                    uint64_t* vocab_size_out) {
  return guarded([&] {
    require(input_path && output_path, "null path");
    dvec::FileTokenStream in(input_path);
    dvec::Vocab vocab = dvec::Vocab::build(in, min_count);
    vocab.save(output_path);
    if (vocab_size_out) *vocab_size_out = vocab.size();
  });
}

void dvec_phrase_options_init(dvec_phrase_options* options) {
  if (options == nullptr) return;
  dvec::PhraseConfig defaults;
  options->iterations = defaults.iterations;
  options->delta = defaults.delta;
  options->keep_prob = defaults.keep_prob;
  options->thresholds = nullptr;
  options->threshold_count = 0;
  options->joiner = defaults.joiner;
  options->seed = 1;
}

int dvec_phrases_file(const char* input_path, const char* output_path, const char* report_path,
                      const dvec_phrase_options* options, uint64_t* merges_out) {
  return guarded([&] {
    require(input_path && output_path, "null path");
    dvec::PhraseConfig config = to_phrase_config(options);
    dvec::Rng rng(options ? options->seed : 1);
    dvec::FileTokenStream in(input_path);
    dvec::SentenceWriter out(output_path);
    auto reports =
        dvec::build_phrases(in, config, rng, [&](const dvec::Sentence& s) { out.write(s); });
    out.close();
    if (report_path) dvec::save_merge_reports(reports, report_path);
    if (merges_out) {
      uint64_t total = 0;
      for (const auto& r : reports) total += r.merges;
      *merges_out = total;
    }
  });
}

void dvec_train_options_init(dvec_train_options* options) {
  if (options == nullptr) return;
  dvec::ModelConfig mc;
  dvec::TrainConfig tc;
  options->dim = mc.dim;
  options->window = mc.window;
  options->use_position_weights = mc.use_position_weights ? 1 : 0;
  options->use_subwords = mc.use_subwords ? 1 : 0;
  options->minn = mc.minn;
  options->maxn = mc.maxn;
  options->buckets = mc.buckets;
  options->negatives = mc.negatives;
  options->lr0 = tc.lr0;
  options->epochs = tc.epochs;
  options->subsample_t = tc.subsample_t;
  options->neg_power = tc.neg_power;
  options->threads = tc.threads;
  options->seed = tc.seed;
  options->dynamic_window = tc.dynamic_window ? 1 : 0;
  options->min_count = 5;
}

int dvec_train_file(const char* corpus_path, const char* vocab_path,
                    const dvec_train_options* options, dvec_epoch_callback on_epoch,
                    void* user_data, dvec_model_t** model_out) {
  return guarded([&] {
    require(corpus_path && options && model_out, "null argument");
    dvec::ModelConfig mc;
    dvec::TrainConfig tc;
    split_options(*options, mc, tc);

    dvec::FileTokenStream in(corpus_path);
    dvec::Vocab vocab;
    if (vocab_path != nullptr) {
      vocab = dvec::Vocab::load(vocab_path);
    } else {
      vocab = dvec::Vocab::build(in, options->min_count);
      in.reset();
    }
    dvec::EncodedCorpus corpus = dvec::encode_corpus(in, vocab);

    dvec::EpochCallback callback;
    if (on_epoch != nullptr) {
      callback = [on_epoch, user_data](const dvec::EpochStats& stats) {
        on_epoch(stats.epoch, stats.mean_loss, stats.tokens_per_sec, user_data);
      };
    }
    dvec::TrainResult result = dvec::train(corpus, vocab, tc, mc, callback);

    auto* handle = new dvec_model;
    handle->model.emplace();
    handle->model->config = mc;
    handle->model->train_config = tc;
    handle->model->vocab = std::move(vocab);
    handle->model->embeddings = std::move(result.embeddings);
    *model_out = handle;
  });
}

int dvec_model_open(const char* path, dvec_model_t** model_out) {
  return guarded([&] {
    require(path && model_out, "null argument");
    auto* handle = new dvec_model;
    try {
      handle->model.emplace(dvec::load_model(path));
    } catch (...) {
      delete handle;
      throw;
    }
    *model_out = handle;
  });
}

int dvec_model_open_text(const char* path, dvec_model_t** model_out) {
  return guarded([&] {
    require(path && model_out, "null argument");
    dvec::TextVectors text = dvec::load_text(path);
    auto* handle = new dvec_model;
    try {
      size_t dim = text.dim;
      handle->vectors.emplace(
          dvec::VectorSet::from_rows(std::move(text.tokens), std::move(text.matrix), dim));
    } catch (...) {
      delete handle;
      throw;
    }
    *model_out = handle;
  });
}

int dvec_model_save(dvec_model_t* model, const char* path) {
  return guarded([&] {
    require(model && path, "null argument");
    require(model->model.has_value(), "handle holds bare vectors, not a full model");
    dvec::save_model(*model->model, path);
  });
}

int dvec_model_export_text(dvec_model_t* model, const char* path) {
  return guarded([&] {
    require(model && path, "null argument");
    require(model->model.has_value(), "handle holds bare vectors, not a full model");
    dvec::save_text(dvec::compose_text_vectors(*model->model), path);
  });
}

void dvec_model_free(dvec_model_t* model) { delete model; }

uint64_t dvec_model_vocab_size(const dvec_model_t* model) {
  if (model == nullptr) return 0;
  if (model->model) return model->model->vocab.size();
  if (model->vectors) return model->vectors->size();
  return 0;
}

uint32_t dvec_model_dim(const dvec_model_t* model) {
  if (model == nullptr) return 0;
  if (model->model) return static_cast<uint32_t>(model->model->embeddings.dim);
  if (model->vectors) return static_cast<uint32_t>(model->vectors->dim());
  return 0;
}

int dvec_eval_analogy(dvec_model_t* model, const char* questions_path, int lowercase,
                      dvec_analogy_result* result_out, char** report_out) {
  return guarded([&] {
    require(model && questions_path, "null argument");
    dvec::AnalogySet set = dvec::load_analogy_file(questions_path, lowercase != 0);
    dvec::AnalogyReport report = dvec::analogy_accuracy(set, model->vector_set());
    if (result_out) {
      result_out->semantic_accuracy = report.sem_acc;
      result_out->syntactic_accuracy = report.syn_acc;
      result_out->total_accuracy = report.total_acc;
      result_out->semantic_answered = report.sem_answered;
      result_out->syntactic_answered = report.syn_answered;
      result_out->oov = report.oov;
    }
    if (report_out) {
      std::string text = dvec::format_analogy_report(report);
      char* copy = static_cast<char*>(std::malloc(text.size() + 1));
      if (copy == nullptr) dvec::fail(dvec::ErrorCode::internal, "out of memory");
      std::memcpy(copy, text.c_str(), text.size() + 1);
      *report_out = copy;
    }
  });
}

int dvec_eval_similarity(dvec_model_t* model, const char* pairs_path, int lowercase,
                         dvec_similarity_result* result_out) {
  return guarded([&] {
    require(model && pairs_path, "null argument");
    auto pairs = dvec::load_similarity_file(pairs_path, lowercase != 0);
    dvec::SimilarityResult result = dvec::similarity_spearman(pairs, model->vector_set());
    if (result_out) {
      result_out->spearman = result.spearman;
      result_out->scored = result.scored;
      result_out->skipped = result.skipped;
    }
  });
}

int dvec_nearest_neighbors(dvec_model_t* model, const char* query, size_t k,
                           dvec_neighbors_t** neighbors_out) {
  return guarded([&] {
    require(model && query && neighbors_out, "null argument");
    auto* result = new dvec_neighbors;
    try {
      result->items = dvec::nearest_neighbors(model->vector_set(), query, k);
    } catch (...) {
      delete result;
      throw;
    }
    *neighbors_out = result;
  });
}

size_t dvec_neighbors_count(const dvec_neighbors_t* neighbors) {
  return neighbors ? neighbors->items.size() : 0;
}

const char* dvec_neighbors_token(const dvec_neighbors_t* neighbors, size_t index) {
  if (neighbors == nullptr || index >= neighbors->items.size()) return nullptr;
  return neighbors->items[index].token.c_str();
}

double dvec_neighbors_cosine(const dvec_neighbors_t* neighbors, size_t index) {
  if (neighbors == nullptr || index >= neighbors->items.size()) return 0.0;
  return neighbors->items[index].cosine;
}

void dvec_neighbors_free(dvec_neighbors_t* neighbors) { delete neighbors; }

void dvec_string_free(char* text) { std::free(text); }

}  // extern "C"
