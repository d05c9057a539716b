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

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "model.h"

namespace dvec {

struct TrainConfig {
  double lr0 = 0.05;
  uint32_t epochs = 5;
  double subsample_t = 1e-5;  // frequent-word discard threshold; 0 turns it off
  uint32_t negatives = 10;
  double neg_power = 0.75;
  uint32_t threads = 1;
  uint64_t seed = 1;
  bool dynamic_window = true;

  void validate() const;
};

// Draws vocab ids proportional to count^power via binary search over exact
// cumulative weights.
class NegativeSampler {
 public:
  NegativeSampler(const Vocab& vocab, double power);
  int32_t sample(Rng& rng) const;
  size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// k draws, redrawing any that hit `exclude`. Duplicates are fine.
void sample_negatives(const NegativeSampler& sampler, uint32_t k, int32_t exclude, Rng& rng,
                      std::vector<int32_t>& out);

template <typename Real>
Real pair_loss(const EmbeddingSet<Real>& emb, const Real* context_vec, size_t target,
               std::span<const int32_t> negatives) {
  Real loss = softplus(-score(emb, context_vec, target));
  for (int32_t n : negatives) loss += softplus(score(emb, context_vec, static_cast<size_t>(n)));
  return loss;
}

// Reusable per-worker buffers for training steps.
template <typename Real>
struct StepScratch {
  std::vector<Real> h;         // context vector
  std::vector<Real> gh;        // d(loss)/d(context vector)
  std::vector<Real> gcomp;     // gradient of one composed input
  std::vector<Real> coeff;     // dL/ds per output row touched
  std::vector<Real> composed;  // cached composed inputs, one block per item
  std::vector<ContextItem> items;
  std::vector<int32_t> negatives;
};

// Applies -lr * g to a word's input row and, with subwords, -lr * g / |N| to
// each of its n-gram rows.
template <typename Real>
void push_input_gradient(EmbeddingSet<Real>& emb, const SubwordIndex* subwords, int32_t word,
                         const Real* g, Real lr) {
  const size_t dim = emb.dim;
  Real* u = emb.input_row(static_cast<size_t>(word));
  for (size_t j = 0; j < dim; j++) u[j] -= lr * g[j];
  if (subwords == nullptr) return;
  auto rows = subwords->rows(static_cast<size_t>(word));
  if (rows.empty()) return;
  const Real share = lr / static_cast<Real>(rows.size());
  for (uint32_t r : rows) {
    Real* x = emb.input_row(r);
    for (size_t j = 0; j < dim; j++) x[j] -= share * g[j];
  }
}

// Phase 1 of a step: build the context at sentence[center] into the scratch
// (h, items, composed). Returns false when no context word is present.
template <typename Real>
bool compose_step_context(const EmbeddingSet<Real>& emb, const SubwordIndex* subwords,
                          const ModelConfig& config, const int32_t* sentence, size_t len,
                          size_t center, uint32_t half_width, StepScratch<Real>& scratch) {
  scratch.h.resize(emb.dim);
  return context_vector(emb, subwords, config, sentence, len, center, half_width,
                        scratch.h.data(), scratch.items, &scratch.composed);
}

// Phase 2: one SGD update of the target/negative output rows, the context
// input rows (with subword shares), and the position rows. Every gradient is
// evaluated at the pre-update parameters, so the result is exactly
// theta - lr * grad(theta). Returns the pre-update loss.
template <typename Real>
Real apply_step(EmbeddingSet<Real>& emb, const SubwordIndex* subwords, const ModelConfig& config,
                int32_t target, std::span<const int32_t> negatives, Real lr,
                StepScratch<Real>& scratch) {
  const size_t dim = emb.dim;
  const Real* h = scratch.h.data();
  auto& gh = scratch.gh;
  gh.assign(dim, Real(0));

  // Scores and dL/ds per output row, all against pre-update rows.
  Real loss = 0;
  auto accumulate = [&](size_t word, bool positive) {
    Real s = score(emb, h, word);
    loss += positive ? softplus(-s) : softplus(s);
    Real a = positive ? sigmoid(s) - Real(1) : sigmoid(s);
    const Real* v = emb.output_row(word);
    for (size_t j = 0; j < dim; j++) gh[j] += a * v[j];
    return a;
  };

  auto& coeff = scratch.coeff;
  coeff.resize(negatives.size() + 1);
  coeff[0] = accumulate(static_cast<size_t>(target), true);
  for (size_t i = 0; i < negatives.size(); i++)
    coeff[i + 1] = accumulate(static_cast<size_t>(negatives[i]), false);

  // Output rows.
  {
    Real* v = emb.output_row(static_cast<size_t>(target));
    const Real step0 = lr * coeff[0];
    for (size_t j = 0; j < dim; j++) v[j] -= step0 * h[j];
    for (size_t i = 0; i < negatives.size(); i++) {
      Real* vn = emb.output_row(static_cast<size_t>(negatives[i]));
      const Real stepn = lr * coeff[i + 1];
      for (size_t j = 0; j < dim; j++) vn[j] -= stepn * h[j];
    }
  }

  // Input and position rows.
  scratch.gcomp.resize(dim);
  Real* gcomp = scratch.gcomp.data();
  const auto& items = scratch.items;
  if (config.use_position_weights) {
    for (size_t i = 0; i < items.size(); i++) {
      Real* d = emb.position_row(items[i].offset);
      const Real* x = scratch.composed.data() + i * dim;
      for (size_t j = 0; j < dim; j++) gcomp[j] = gh[j] * d[j];
      for (size_t j = 0; j < dim; j++) d[j] -= lr * gh[j] * x[j];
      push_input_gradient(emb, subwords, items[i].word, gcomp, lr);
    }
  } else {
    const Real inv = Real(1) / static_cast<Real>(items.size());
    for (size_t j = 0; j < dim; j++) gcomp[j] = gh[j] * inv;
    for (const auto& item : items) push_input_gradient(emb, subwords, item.word, gcomp, lr);
  }
  return loss;
}

// Full training step: compose the context, draw negatives, update. Empty
// contexts are skipped without consuming sampler draws.
template <typename Real>
std::optional<Real> step(EmbeddingSet<Real>& emb, const SubwordIndex* subwords,
                         const ModelConfig& config, const NegativeSampler& sampler,
                         const int32_t* sentence, size_t len, size_t center, uint32_t half_width,
                         Real lr, uint32_t k, Rng& rng, StepScratch<Real>& scratch) {
  if (!compose_step_context(emb, subwords, config, sentence, len, center, half_width, scratch))
    return std::nullopt;
  sample_negatives(sampler, k, sentence[center], rng, scratch.negatives);
  return apply_step(emb, subwords, config, sentence[center], scratch.negatives, lr, scratch);
}

// Vocab-encoded corpus held in memory: ids back to back plus sentence bounds.
// Out-of-vocab tokens are dropped at encode time.
struct EncodedCorpus {
  std::vector<int32_t> tokens;
  std::vector<uint64_t> offsets;  // sentence s spans [offsets[s], offsets[s+1])

  size_t sentences() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

EncodedCorpus encode_corpus(TokenStream& in, const Vocab& vocab);

struct EpochStats {
  uint32_t epoch = 0;  // 1-based
  double mean_loss = 0;
  double tokens_per_sec = 0;
};

std::string format_epoch_line(const EpochStats& stats);

struct TrainResult {
  EmbeddingSet<float> embeddings;
  std::vector<EpochStats> epochs;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Negative-sampling cbow training over the encoded corpus. Subsampling, the
// learning-rate schedule, window handling and the shared-parameter threading
// contract are described in the implementation.
TrainResult train(const EncodedCorpus& corpus, const Vocab& vocab, const TrainConfig& config,
                  const ModelConfig& model_config, const EpochCallback& on_epoch = nullptr);

}  // namespace dvec
