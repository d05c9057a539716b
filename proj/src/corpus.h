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
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "token_stream.h"
#include "util.h"

namespace dvec {

// Sentence-level de-duplication on the byte-exact joined token sequence.
// Sentences are admitted through a 128-bit fingerprint set; exact mode keeps
// the joined bytes and re-compares them on a fingerprint hit. admit() is an
// atomic insert-if-absent and is safe to call from concurrent shards.
class Deduper {
 public:
  explicit Deduper(bool exact = false) : exact_(exact) {}

  // True exactly once per distinct sentence.
  bool admit(const Sentence& sentence);

  uint64_t kept() const { return kept_; }
  uint64_t dropped() const { return dropped_; }

 private:
  bool exact_;
  std::mutex mu_;
  std::unordered_set<Fp128, Fp128Hash> seen_;
  std::unordered_map<Fp128, std::vector<std::string>, Fp128Hash> exact_seen_;
  uint64_t kept_ = 0;
  uint64_t dropped_ = 0;
};

// Streams `in`, forwarding the first occurrence of each distinct sentence in
// order. Returns the number of dropped (duplicate) sentences.
uint64_t dedup_sentences(TokenStream& in, const SentenceSink& sink, bool exact = false);

class Vocab {
 public:
  struct Entry {
    std::string token;
    uint64_t count = 0;
  };

  Vocab() = default;

  // Counts every token in the stream, prunes counts below min_count, and
  // assigns dense ids in (count desc, token asc) order. min_count >= 1.
  static Vocab build(TokenStream& in, uint64_t min_count);

  static Vocab from_counts(std::vector<Entry> entries, uint64_t min_count);

  std::optional<uint32_t> id_of(std::string_view token) const;
  bool contains(std::string_view token) const { return id_of(token).has_value(); }
  const Entry& entry(uint32_t id) const { return entries_[id]; }
  uint32_t size() const { return static_cast<uint32_t>(entries_.size()); }
  uint64_t total_count() const { return total_count_; }
  uint64_t min_count() const { return min_count_; }

  // Frequency f_w = count / total_count.
  double frequency(uint32_t id) const;

  // p_disc per id for the given subsampling threshold.
  std::vector<double> discard_probs(double t) const;

  // "token<TAB>count" per line, descending count, after "#total <count>".
  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, uint32_t, StringHash, std::equal_to<>> index_;
  uint64_t total_count_ = 0;
  uint64_t min_count_ = 1;

  void rebuild_index();
};

// p_disc(w) = max(0, 1 - sqrt(t / f_w)). Requires 0 < f_w <= 1 and t > 0.
double discard_prob(double f_w, double t);

// Independently drops each occurrence with probability p_disc; out-of-vocab
// tokens are always dropped. Emits every sentence, including emptied ones.
void subsample(TokenStream& in, const Vocab& vocab, double t, Rng& rng,
               const SentenceSink& sink);

// Add-one-smoothed unigram language model over a fixed vocabulary, with the
// unseen-token mass folded in as one extra outcome: every in-vocab token w
// scores (count_w + 1) / (total + |V| + 1) and any unseen token scores
// 1 / (total + |V| + 1), so the distribution sums to one.
class UnigramLM {
 public:
  static UnigramLM train(TokenStream& in, const Vocab& vocab);

  double logprob(std::string_view token) const;
  double oov_logprob() const { return oov_logprob_; }

  // Mean per-token log probability; -inf for an empty document.
  double score_document(const Sentence& document) const;

  struct Decision {
    bool keep = false;
    double score = 0.0;
  };
  // keep iff score >= threshold; empty documents are always discarded.
  Decision filter(const Sentence& document, double threshold) const;

 private:
  std::unordered_map<std::string, double, StringHash, std::equal_to<>> log_probs_;
  double oov_logprob_ = 0.0;
};

}  // namespace dvec
