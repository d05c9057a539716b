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

#include <optional>
#include <string>
#include <vector>

#include "model.h"

namespace dvec {

// Unit-normalized lookup table over a fixed token list. Built from a trained
// model (composed input vectors; the model must outlive this object, which
// borrows it for out-of-vocabulary queries) or from bare rows loaded from a
// vectors file.
class VectorSet {
 public:
  static VectorSet from_model(const Vocab& vocab, const ModelConfig& config,
                              const EmbeddingSet<float>& emb);
  static VectorSet from_rows(std::vector<std::string> tokens, std::vector<float> matrix,
                             size_t dim);

  size_t size() const { return tokens_.size(); }
  size_t dim() const { return dim_; }
  const std::string& token(size_t i) const { return tokens_[i]; }
  std::optional<uint32_t> find(std::string_view token) const;
  const float* row(size_t i) const { return rows_.data() + i * dim_; }

  // Unit vector for an arbitrary token: its table row, or the normalized
  // subword composition when the backing model has subwords. False when the
  // token cannot be resolved.
  bool resolve(std::string_view token, float* out) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, uint32_t, StringHash, std::equal_to<>> index_;
  std::vector<float> rows_;
  size_t dim_ = 0;

  const Vocab* vocab_ = nullptr;
  const ModelConfig* config_ = nullptr;
  const EmbeddingSet<float>* emb_ = nullptr;
};

struct AnalogyItem {
  std::string a, b, c, d;
  uint32_t section = 0;
  bool syntactic = false;
};

struct AnalogySet {
  std::vector<AnalogyItem> items;
  std::vector<std::string> sections;
};

// Section headers are ": name" lines; items are 4 space-separated tokens.
// Sections whose name starts with "gram" count as syntactic.
AnalogySet load_analogy_file(const std::string& path, bool lowercase = false);

// 3CosAdd: index of argmax_w cos(x_w, x_b - x_a + x_c) over unit vectors,
// skipping {a,b,c} rows when exclude_inputs. Nothing when an input is
// out of vocabulary.
std::optional<size_t> analogy_predict(const VectorSet& vectors, std::string_view a,
                                      std::string_view b, std::string_view c,
                                      bool exclude_inputs = true);

struct SectionScore {
  std::string name;
  bool syntactic = false;
  uint64_t correct = 0;
  uint64_t answered = 0;
  uint64_t oov = 0;
};

struct AnalogyReport {
  std::vector<SectionScore> sections;
  uint64_t sem_correct = 0, sem_answered = 0;
  uint64_t syn_correct = 0, syn_answered = 0;
  uint64_t oov = 0;
  double sem_acc = 0, syn_acc = 0, total_acc = 0;  // zero when nothing answered
};

// Items with any of the four tokens out of vocabulary are skipped and
// counted as OOV; accuracies are over answered items only.
AnalogyReport analogy_accuracy(const AnalogySet& set, const VectorSet& vectors,
                               bool exclude_inputs = true);

std::string format_analogy_report(const AnalogyReport& report);

struct SimilarityPair {
  std::string w1, w2;
  double gold = 0;
};

// "w1<TAB>w2<TAB>score" per line.
std::vector<SimilarityPair> load_similarity_file(const std::string& path,
                                                 bool lowercase = false);

struct SimilarityResult {
  double spearman = 0;
  uint64_t scored = 0;
  uint64_t skipped = 0;
};

// Spearman rank correlation (average ranks on ties) between model cosines
// and gold scores. Pairs with an unresolvable word are skipped; fewer than 2
// scorable pairs is an error.
SimilarityResult similarity_spearman(const std::vector<SimilarityPair>& pairs,
                                     const VectorSet& vectors);

// Average ranks, 1-based; tied values share the mean of their rank range.
std::vector<double> average_ranks(const std::vector<double>& values);

double spearman_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

struct Neighbor {
  std::string token;
  double cosine = 0;
};

// Top-k rows by cosine against the resolved query, excluding the query token
// itself, descending, ties by token order.
std::vector<Neighbor> nearest_neighbors(const VectorSet& vectors, std::string_view query,
                                        size_t k);

}  // namespace dvec
