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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.h"
#include "util.h"

namespace dvec {

struct ModelConfig {
  uint32_t dim = 100;
  uint32_t window = 5;  // half-width c; the context spans 2c positions
  bool use_position_weights = false;
  bool use_subwords = false;
  uint32_t minn = 3;
  uint32_t maxn = 6;
  uint32_t buckets = 2000000;
  uint32_t negatives = 10;

  void validate() const;
};

// Character n-grams of the word wrapped in '<' and '>', lengths minn..maxn,
// excluding the fully wrapped word itself. Duplicates appear once, in
// first-occurrence order.
std::vector<std::string> char_ngrams(std::string_view word, uint32_t minn, uint32_t maxn);

// FNV-1a over the n-gram bytes, reduced mod buckets.
uint32_t hash_ngram(std::string_view ngram, uint32_t buckets);

// Input-matrix rows of each vocab word's n-grams, resolved once up front.
// Row values are absolute (vocab_size + bucket).
class SubwordIndex {
 public:
  static SubwordIndex build(const Vocab& vocab, const ModelConfig& config);

  std::span<const uint32_t> rows(size_t word_id) const {
    return {rows_.data() + offsets_[word_id], rows_.data() + offsets_[word_id + 1]};
  }
  size_t words() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }

 private:
  std::vector<uint32_t> rows_;
  std::vector<uint64_t> offsets_;
};

// Model parameters. The input matrix holds one row per vocab word followed by
// the subword hash buckets; the output matrix is whole-word only. Position
// rows exist only when position weighting is on.
template <typename Real>
struct EmbeddingSet {
  size_t vocab_rows = 0;
  size_t dim = 0;
  uint32_t window = 0;
  std::vector<Real> input;
  std::vector<Real> output;
  std::vector<Real> positions;

  static EmbeddingSet create(const ModelConfig& config, size_t vocab_size, uint64_t seed) {
    config.validate();
    EmbeddingSet e;
    e.vocab_rows = vocab_size;
    e.dim = config.dim;
    e.window = config.window;
    size_t input_rows = vocab_size + (config.use_subwords ? config.buckets : 0);
    e.input.resize(input_rows * e.dim);
    e.output.assign(vocab_size * e.dim, Real(0));
    Rng rng(seed);
    const double scale = 1.0 / config.dim;
    for (auto& v : e.input) v = static_cast<Real>((rng.next_double() - 0.5) * scale);
    if (config.use_position_weights) {
      e.positions.assign(size_t(2) * config.window * e.dim,
                         static_cast<Real>(1.0 / (2.0 * config.window)));
    }
    return e;
  }

  size_t input_rows() const { return input.size() / dim; }
  Real* input_row(size_t r) { return input.data() + r * dim; }
  const Real* input_row(size_t r) const { return input.data() + r * dim; }
  Real* output_row(size_t r) { return output.data() + r * dim; }
  const Real* output_row(size_t r) const { return output.data() + r * dim; }

  // p in [-window..-1] or [1..window]
  size_t position_index(int32_t p) const {
    return static_cast<size_t>(p < 0 ? p + static_cast<int32_t>(window)
                                     : p + static_cast<int32_t>(window) - 1);
  }
  Real* position_row(int32_t p) { return positions.data() + position_index(p) * dim; }
  const Real* position_row(int32_t p) const {
    return positions.data() + position_index(p) * dim;
  }

  bool finite() const;
};

template <typename Real>
bool EmbeddingSet<Real>::finite() const {
  auto ok = [](const std::vector<Real>& m) {
    for (Real v : m)
      if (!std::isfinite(v)) return false;
    return true;
  };
  return ok(input) && ok(output) && ok(positions);
}

// Composed input vector of an in-vocab word: u_w alone, or u_w plus the mean
// of its n-gram bucket vectors when subwords are on (pass the index).
template <typename Real>
void compose_input(const EmbeddingSet<Real>& emb, const SubwordIndex* subwords, size_t word,
                   Real* out) {
  const Real* u = emb.input_row(word);
  for (size_t j = 0; j < emb.dim; j++) out[j] = u[j];
  if (subwords == nullptr) return;
  auto rows = subwords->rows(word);
  if (rows.empty()) return;
  const Real inv = Real(1) / static_cast<Real>(rows.size());
  for (uint32_t r : rows) {
    const Real* x = emb.input_row(r);
    for (size_t j = 0; j < emb.dim; j++) out[j] += inv * x[j];
  }
}

// One context slot: signed offset from the center and the word found there.
struct ContextItem {
  int32_t offset = 0;
  int32_t word = 0;
};

// Builds the context vector for sentence[center] with the given half-width.
// Fills `items` with the present in-window slots and, when `composed` is not
// null, their composed input vectors back to back. Plain mode averages;
// weighted mode sums d_p ⊙ input over positions. Returns false when no
// context word is present (the caller skips this center).
template <typename Real>
bool context_vector(const EmbeddingSet<Real>& emb, const SubwordIndex* subwords,
                    const ModelConfig& config, const int32_t* sentence, size_t len, size_t center,
                    uint32_t half_width, Real* out, std::vector<ContextItem>& items,
                    std::vector<Real>* composed) {
  items.clear();
  const int64_t c = static_cast<int64_t>(center);
  for (int64_t p = -static_cast<int64_t>(half_width); p <= static_cast<int64_t>(half_width);
       p++) {
    if (p == 0) continue;
    int64_t idx = c + p;
    if (idx < 0 || idx >= static_cast<int64_t>(len)) continue;
    items.push_back({static_cast<int32_t>(p), sentence[idx]});
  }
  if (items.empty()) return false;

  const size_t dim = emb.dim;
  std::vector<Real> local;
  std::vector<Real>* buf = composed ? composed : &local;
  buf->resize(items.size() * dim);
  for (size_t i = 0; i < items.size(); i++)
    compose_input(emb, subwords, static_cast<size_t>(items[i].word), buf->data() + i * dim);

  for (size_t j = 0; j < dim; j++) out[j] = Real(0);
  if (config.use_position_weights) {
    for (size_t i = 0; i < items.size(); i++) {
      const Real* d = emb.position_row(items[i].offset);
      const Real* x = buf->data() + i * dim;
      for (size_t j = 0; j < dim; j++) out[j] += d[j] * x[j];
    }
  } else {
    for (size_t i = 0; i < items.size(); i++) {
      const Real* x = buf->data() + i * dim;
      for (size_t j = 0; j < dim; j++) out[j] += x[j];
    }
    const Real inv = Real(1) / static_cast<Real>(items.size());
    for (size_t j = 0; j < dim; j++) out[j] *= inv;
  }
  return true;
}

// Dot product of a context vector with the output row of `word`.
template <typename Real>
Real score(const EmbeddingSet<Real>& emb, const Real* context_vec, size_t word) {
  if (word >= emb.vocab_rows) fail(ErrorCode::lookup, "score: word id out of range");
  const Real* v = emb.output_row(word);
  Real s = 0;
  for (size_t j = 0; j < emb.dim; j++) s += context_vec[j] * v[j];
  return s;
}

// Composed input vector for an arbitrary token, n-grams computed on the fly.
// In vocab: u_w (+ subword mean). Out of vocab with subwords on: the n-gram
// mean alone. Out of vocab otherwise: lookup error.
template <typename Real>
void input_vector_for_token(const EmbeddingSet<Real>& emb, const Vocab& vocab,
                            const ModelConfig& config, std::string_view token, Real* out) {
  auto id = vocab.id_of(token);
  std::vector<std::string> grams;
  if (config.use_subwords) grams = char_ngrams(token, config.minn, config.maxn);

  if (id.has_value()) {
    const Real* u = emb.input_row(*id);
    for (size_t j = 0; j < emb.dim; j++) out[j] = u[j];
  } else if (!config.use_subwords) {
    fail(ErrorCode::lookup, "unknown token: " + std::string(token));
  } else if (grams.empty()) {
    fail(ErrorCode::lookup, "token has no n-grams: " + std::string(token));
  } else {
    for (size_t j = 0; j < emb.dim; j++) out[j] = Real(0);
  }

  if (config.use_subwords && !grams.empty()) {
    const Real inv = Real(1) / static_cast<Real>(grams.size());
    for (const auto& g : grams) {
      const Real* x = emb.input_row(emb.vocab_rows + hash_ngram(g, config.buckets));
      for (size_t j = 0; j < emb.dim; j++) out[j] += inv * x[j];
    }
  }
}

}  // namespace dvec
