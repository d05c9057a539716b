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

// Command-line front end. Talks to the library strictly through the C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dvec/dvec.h"

namespace {

[[noreturn]] void die(int status) {
  std::fprintf(stderr, "error: %s (%s)\n", dvec_last_error(), dvec_status_name(status));
  std::exit(2);
}

void check(int status) {
  if (status != DVEC_OK) die(status);
}

struct ModelArg {
  std::string model_path;
  std::string vectors_path;

  void attach(CLI::App* cmd) {
    auto* m = cmd->add_option("--model", model_path, "binary model file");
    auto* v = cmd->add_option("--vectors", vectors_path, "text vector table");
    m->excludes(v);
    v->excludes(m);
  }

  dvec_model_t* open() const {
    if (model_path.empty() && vectors_path.empty()) {
      std::fprintf(stderr, "error: need --model or --vectors\n");
      std::exit(1);
    }
    dvec_model_t* model = nullptr;
    if (!model_path.empty())
      check(dvec_model_open(model_path.c_str(), &model));
    else
      check(dvec_model_open_text(vectors_path.c_str(), &model));
    return model;
  }
};

void print_epoch(uint32_t epoch, double loss, double tokens_per_sec, void*) {
  std::printf("epoch %u loss %g tokens_per_sec %g\n", epoch, loss, tokens_per_sec);
  std::fflush(stdout);
}

[[noreturn]] void usage_error(const CLI::App& cmd, const std::string& message) {
  std::fprintf(stderr, "error: %s\n%s", message.c_str(), cmd.help().c_str());
  std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word embedding pipeline: dedup, filter, phrases, vocab, train, evaluate"};
  app.require_subcommand(1);

  // dedup
  std::string in_path, out_path;
  bool exact = false;
  auto* dedup = app.add_subcommand("dedup", "drop repeated sentences");
  dedup->add_option("-i,--input", in_path, "input corpus")->required();
  dedup->add_option("-o,--output", out_path, "output corpus")->required();
  dedup->add_flag("--exact", exact, "compare full sentence bytes, not just fingerprints");

  // filter
  std::string lm_corpus;
  double lm_threshold = -8.0;
  uint64_t lm_min_count = 1;
  auto* filter = app.add_subcommand("filter", "keep lines a reference unigram model likes");
  filter->add_option("-i,--input", in_path, "input corpus")->required();
  filter->add_option("-o,--output", out_path, "output corpus")->required();
  filter->add_option("--lm-corpus", lm_corpus, "reference corpus the model is trained on")
      ->required();
  filter->add_option("--threshold", lm_threshold, "minimum mean log probability")
      ->capture_default_str();
  filter->add_option("--lm-min-count", lm_min_count, "vocabulary pruning for the model")
      ->capture_default_str();

  // phrases
  dvec_phrase_options phrase_options;
  dvec_phrase_options_init(&phrase_options);
  std::vector<double> phrase_thresholds;
  std::string phrase_report;
  uint64_t phrase_seed = phrase_options.seed;
  auto* phrases = app.add_subcommand("phrases", "merge high-mutual-information bigrams");
  phrases->add_option("-i,--input", in_path, "input corpus")->required();
  phrases->add_option("-o,--output", out_path, "output corpus")->required();
  phrases->add_option("--phrase-iters,--iters", phrase_options.iterations, "merge passes")
      ->capture_default_str();
  phrases
      ->add_option("--phrase-threshold,--threshold", phrase_thresholds,
                   "per-pass score cutoffs; the last value keeps halving")
      ->expected(-1);
  phrases->add_option("--phrase-delta,--delta", phrase_options.delta, "discount count")
      ->capture_default_str();
  phrases
      ->add_option("--phrase-keep-prob,--keep-prob", phrase_options.keep_prob,
                   "chance a qualifying pair is merged")
      ->capture_default_str();
  phrases->add_option("--report", phrase_report, "write per-pass merge report here");
  phrases->add_option("--seed", phrase_seed, "rng seed")->capture_default_str();

  // vocab
  uint64_t vocab_min_count = 5;
  auto* vocab = app.add_subcommand("vocab", "count tokens into a vocabulary file");
  vocab->add_option("-i,--input", in_path, "input corpus")->required();
  vocab->add_option("-o,--output", out_path, "vocabulary file")->required();
  vocab->add_option("--min-count", vocab_min_count, "drop rarer tokens")->capture_default_str();

  // train
  dvec_train_options train_options;
  dvec_train_options_init(&train_options);
  std::string train_vocab_path;
  bool pos_weights = false, subwords = false, no_dynamic = false;
  auto* train = app.add_subcommand("train", "train embeddings on a corpus");
  train->add_option("-i,--input", in_path, "training corpus")->required();
  train->add_option("-o,--output", out_path, "model file to write")->required();
  train->add_option("--vocab", train_vocab_path, "use this vocabulary file instead of counting");
  train->add_option("--dim", train_options.dim, "embedding dimension")->capture_default_str();
  auto* window_opt =
      train->add_option("--window", train_options.window, "context half-width")
          ->capture_default_str();
  train->add_flag("--pos-weights", pos_weights,
                  "learn per-position reweighting (default window becomes 15)");
  train->add_flag("--subwords", subwords, "add character n-gram vectors");
  train->add_option("--minn", train_options.minn, "shortest n-gram")->capture_default_str();
  train->add_option("--maxn", train_options.maxn, "longest n-gram")->capture_default_str();
  train->add_option("--buckets", train_options.buckets, "n-gram hash buckets")
      ->capture_default_str();
  train->add_option("--neg,--negatives", train_options.negatives, "negative samples per word")
      ->capture_default_str();
  train->add_option("--lr", train_options.lr0, "initial learning rate")->capture_default_str();
  train->add_option("--epochs", train_options.epochs, "training passes")->capture_default_str();
  train->add_option("--t,--sample", train_options.subsample_t,
                    "frequent-word subsampling threshold, 0 = off")
      ->capture_default_str();
  train->add_option("--neg-power", train_options.neg_power, "negative distribution exponent")
      ->capture_default_str();
  train->add_option("--threads", train_options.threads, "worker threads")->capture_default_str();
  train->add_option("--seed", train_options.seed, "rng seed")->capture_default_str();
  train->add_option("--min-count", train_options.min_count, "vocabulary pruning threshold")
      ->capture_default_str();
  train->add_flag("--no-dynamic-window", no_dynamic,
                  "always use the full window instead of sampling its width");

  // eval-analogy
  ModelArg eval_model;
  std::string questions_path;
  bool lowercase = false;
  auto* eval_analogy = app.add_subcommand("eval-analogy", "word analogy accuracy");
  eval_model.attach(eval_analogy);
  eval_analogy->add_option("--questions", questions_path, "analogy question file")->required();
  eval_analogy->add_flag("--lowercase", lowercase, "lowercase the questions first");

  // eval-sim
  ModelArg sim_model;
  std::string pairs_path;
  bool sim_lowercase = false;
  auto* eval_sim = app.add_subcommand("eval-sim", "word similarity correlation");
  sim_model.attach(eval_sim);
  eval_sim->add_option("--pairs", pairs_path, "w1<TAB>w2<TAB>score file")->required();
  eval_sim->add_flag("--lowercase", sim_lowercase, "lowercase the pairs first");

  // nn
  ModelArg nn_model;
  std::string query;
  uint64_t topk = 10;
  auto* nn = app.add_subcommand("nn", "nearest neighbors of a token");
  nn_model.attach(nn);
  nn->add_option("--query", query, "token or phrase token")->required();
  nn->add_option("-k,--top", topk, "neighbors to print")->capture_default_str();

  // export
  std::string export_model_path;
  auto* export_cmd = app.add_subcommand("export", "write text vectors from a model");
  export_cmd->add_option("--model", export_model_path, "binary model file")->required();
  export_cmd->add_option("-o,--output", out_path, "text vector file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n%s", e.what(), app.help().c_str());
    return 1;
  }

  if (dedup->parsed()) {
    uint64_t dropped = 0;
    check(dvec_dedup_file(in_path.c_str(), out_path.c_str(), exact ? 1 : 0, &dropped));
    std::printf("dropped %" PRIu64 "\n", dropped);
  } else if (filter->parsed()) {
    uint64_t kept = 0, dropped = 0;
    check(dvec_filter_file(in_path.c_str(), out_path.c_str(), lm_corpus.c_str(), lm_min_count,
                           lm_threshold, &kept, &dropped));
    std::printf("kept %" PRIu64 " dropped %" PRIu64 "\n", kept, dropped);
  } else if (phrases->parsed()) {
    if (phrase_options.iterations < 1)
      usage_error(*phrases, "--phrase-iters must be at least 1");
    if (!(phrase_options.keep_prob > 0.0 && phrase_options.keep_prob <= 1.0))
      usage_error(*phrases, "--phrase-keep-prob must be in (0, 1]");
    if (phrase_options.delta < 0) usage_error(*phrases, "--phrase-delta must be non-negative");
    if (!phrase_thresholds.empty()) {
      phrase_options.thresholds = phrase_thresholds.data();
      phrase_options.threshold_count = phrase_thresholds.size();
    }
    phrase_options.seed = phrase_seed;
    uint64_t merges = 0;
    check(dvec_phrases_file(in_path.c_str(), out_path.c_str(),
                            phrase_report.empty() ? nullptr : phrase_report.c_str(),
                            &phrase_options, &merges));
    std::printf("merges %" PRIu64 "\n", merges);
  } else if (vocab->parsed()) {
    uint64_t size = 0;
    check(dvec_vocab_file(in_path.c_str(), out_path.c_str(), vocab_min_count, &size));
    std::printf("vocab %" PRIu64 "\n", size);
  } else if (train->parsed()) {
    if (train_options.minn > train_options.maxn)
      usage_error(*train, "--minn must not exceed --maxn");
    if (train_options.dim == 0) usage_error(*train, "--dim must be positive");
    if (train_options.window == 0) usage_error(*train, "--window must be positive");
    if (train_options.epochs == 0) usage_error(*train, "--epochs must be positive");
    if (train_options.negatives == 0) usage_error(*train, "--neg must be positive");
    if (train_options.buckets == 0) usage_error(*train, "--buckets must be positive");
    if (!(train_options.lr0 > 0)) usage_error(*train, "--lr must be positive");
    if (train_options.threads == 0) usage_error(*train, "--threads must be positive");
    train_options.use_position_weights = pos_weights ? 1 : 0;
    train_options.use_subwords = subwords ? 1 : 0;
    train_options.dynamic_window = no_dynamic ? 0 : 1;
    if (pos_weights && window_opt->count() == 0) train_options.window = 15;
    dvec_model_t* model = nullptr;
    check(dvec_train_file(in_path.c_str(),
                          train_vocab_path.empty() ? nullptr : train_vocab_path.c_str(),
                          &train_options, print_epoch, nullptr, &model));
    int status = dvec_model_save(model, out_path.c_str());
    dvec_model_free(model);
    check(status);
  } else if (eval_analogy->parsed()) {
    dvec_model_t* model = eval_model.open();
    dvec_analogy_result result;
    char* report = nullptr;
    int status = dvec_eval_analogy(model, questions_path.c_str(), lowercase ? 1 : 0, &result,
                                   &report);
    dvec_model_free(model);
    check(status);
    std::fputs(report, stdout);
    dvec_string_free(report);
  } else if (eval_sim->parsed()) {
    dvec_model_t* model = sim_model.open();
    dvec_similarity_result result;
    int status = dvec_eval_similarity(model, pairs_path.c_str(), sim_lowercase ? 1 : 0, &result);
    dvec_model_free(model);
    check(status);
    std::printf("spearman %g scored %" PRIu64 " skipped %" PRIu64 "\n", result.spearman,
                result.scored, result.skipped);
  } else if (nn->parsed()) {
    dvec_model_t* model = nn_model.open();
    dvec_neighbors_t* neighbors = nullptr;
    int status = dvec_nearest_neighbors(model, query.c_str(), topk, &neighbors);
    if (status != DVEC_OK) {
      dvec_model_free(model);
      die(status);
    }
    for (size_t i = 0; i < dvec_neighbors_count(neighbors); i++)
      std::printf("%s %g\n", dvec_neighbors_token(neighbors, i),
                  dvec_neighbors_cosine(neighbors, i));
    dvec_neighbors_free(neighbors);
    dvec_model_free(model);
  } else if (export_cmd->parsed()) {
    dvec_model_t* model = nullptr;
    check(dvec_model_open(export_model_path.c_str(), &model));
    int status = dvec_model_export_text(model, out_path.c_str());
    dvec_model_free(model);
    check(status);
  }
  return 0;
}
