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

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "token_stream.h"
#include "util.h"

namespace dvec {

// Unigram and within-sentence adjacent-bigram counts for one merge pass.
struct PhraseStats {
  std::unordered_map<std::string, uint64_t, StringHash, std::equal_to<>> unigrams;
  std::unordered_map<std::string, uint64_t, StringHash, std::equal_to<>> bigrams;
  uint64_t total_tokens = 0;

  uint64_t unigram_count(std::string_view token) const;
  uint64_t bigram_count(std::string_view a, std::string_view b) const;
  static std::string bigram_key(std::string_view a, std::string_view b);
};

struct PhraseConfig {
  double delta = 5.0;
  // Score cutoff per pass; beyond the list the last value keeps halving, so
  // the default {200} yields 200, 100, 50, ... across passes.
  std::vector<double> thresholds = {200.0};
  uint32_t iterations = 6;
  double keep_prob = 0.5;
  char joiner = '_';

  double threshold_for_pass(uint32_t pass) const;
  void validate() const;
};

struct MergedBigram {
  std::string left;
  std::string right;
  double score = 0.0;
  uint64_t merge_count = 0;
};

struct MergeReport {
  uint32_t pass = 0;
  uint64_t input_tokens = 0;
  uint64_t merges = 0;
  std::vector<MergedBigram> bigrams;  // sorted by score desc
};

PhraseStats count_stats(TokenStream& in);

// (c_ab - delta) * N / (c_a * c_b). Negative scores are allowed; zero
// unigram counts are a domain error.
double bigram_score(uint64_t c_ab, uint64_t c_a, uint64_t c_b, double delta, uint64_t n);

// One left-to-right merge pass. For each adjacent pair scoring above the
// threshold, the pair merges into "a<joiner>b" with probability keep_prob and
// the scan advances past both tokens; merges never overlap. Tokens listed in
// `exempt` (those that natively contain the joiner byte) never merge, so the
// joiner stays reversible.
MergeReport merge_pass(TokenStream& in, const PhraseStats& stats, const PhraseConfig& config,
                       uint32_t pass, Rng& rng, const SentenceSink& sink,
                       const TokenSet* exempt = nullptr);

// Runs config.iterations rounds of (count_stats -> merge_pass), re-counting
// after each pass so merged tokens participate as units in later passes.
// Input must fit in memory as token strings; pipelines at larger scale chain
// single passes through files instead.
std::vector<MergeReport> build_phrases(TokenStream& in, const PhraseConfig& config, Rng& rng,
                                       const SentenceSink& sink);

// Tokens that already contain the joiner in the original input; merging them
// would make the joiner ambiguous, so they are exempt.
TokenSet find_joiner_tokens(TokenStream& in, char joiner);

void save_merge_reports(const std::vector<MergeReport>& reports, const std::string& path);

}  // namespace dvec
