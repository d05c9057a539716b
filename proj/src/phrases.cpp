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

#include "phrases.h"

#include <algorithm>
#include <fstream>

namespace dvec {

std::string PhraseStats::bigram_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a);
  key.push_back('\t');
  key.append(b);
  return key;
}

uint64_t PhraseStats::unigram_count(std::string_view token) const {
  auto it = unigrams.find(token);
  return it == unigrams.end() ? 0 : it->second;
}

uint64_t PhraseStats::bigram_count(std::string_view a, std::string_view b) const {
  auto it = bigrams.find(bigram_key(a, b));
  return it == bigrams.end() ? 0 : it->second;
}

double PhraseConfig::threshold_for_pass(uint32_t pass) const {
  if (thresholds.empty()) fail(ErrorCode::invalid_argument, "empty phrase threshold list");
  if (pass < thresholds.size()) return thresholds[pass];
  double t = thresholds.back();
  for (size_t i = thresholds.size(); i <= pass; i++) t /= 2.0;
  return t;
}

void PhraseConfig::validate() const {
  if (!(keep_prob > 0.0 && keep_prob <= 1.0))
    fail(ErrorCode::invalid_argument, "keep_prob must be in (0, 1]");
  if (iterations < 1) fail(ErrorCode::invalid_argument, "iterations must be >= 1");
  if (delta < 0.0) fail(ErrorCode::invalid_argument, "delta must be >= 0");
  if (thresholds.empty()) fail(ErrorCode::invalid_argument, "empty phrase threshold list");
}

PhraseStats count_stats(TokenStream& in) {
  PhraseStats stats;
  Sentence sentence;
  while (in.next(sentence)) {
    for (size_t i = 0; i < sentence.size(); i++) {
      auto it = stats.unigrams.find(sentence[i]);
      if (it == stats.unigrams.end()) {
        stats.unigrams.emplace(std::string(sentence[i]), 1);
      } else {
        it->second++;
      }
      stats.total_tokens++;
      if (i + 1 < sentence.size()) {
        stats.bigrams[PhraseStats::bigram_key(sentence[i], sentence[i + 1])]++;
      }
    }
  }
  return stats;
}

double bigram_score(uint64_t c_ab, uint64_t c_a, uint64_t c_b, double delta, uint64_t n) {
  if (c_a == 0 || c_b == 0) fail(ErrorCode::domain, "bigram_score needs nonzero unigram counts");
  if (n == 0) fail(ErrorCode::domain, "bigram_score needs a nonzero corpus size");
  return (static_cast<double>(c_ab) - delta) * static_cast<double>(n) /
         (static_cast<double>(c_a) * static_cast<double>(c_b));
}

MergeReport merge_pass(TokenStream& in, const PhraseStats& stats, const PhraseConfig& config,
                       uint32_t pass, Rng& rng, const SentenceSink& sink,
                       const TokenSet* exempt) {
  config.validate();
  const double threshold = config.threshold_for_pass(pass);

  MergeReport report;
  report.pass = pass;
  std::unordered_map<std::string, MergedBigram, StringHash, std::equal_to<>> merged;

  auto blocked = [&](std::string_view token) { return exempt != nullptr && exempt->contains(token); };

  Sentence sentence;
  std::vector<std::string> out;
  Sentence out_views;
  while (in.next(sentence)) {
    out.clear();
    report.input_tokens += sentence.size();
    size_t i = 0;
    while (i < sentence.size()) {
      bool do_merge = false;
      if (i + 1 < sentence.size()) {
        std::string_view a = sentence[i];
        std::string_view b = sentence[i + 1];
        uint64_t c_ab;
        if (!blocked(a) && !blocked(b) && (c_ab = stats.bigram_count(a, b)) > 0) {
          double score = bigram_score(c_ab, stats.unigram_count(a), stats.unigram_count(b),
                                      config.delta, stats.total_tokens);
          if (score > threshold && rng.next_double() < config.keep_prob) {
            std::string joined;
            joined.reserve(a.size() + b.size() + 1);
            joined.append(a);
            joined.push_back(config.joiner);
            joined.append(b);
            out.push_back(std::move(joined));

            auto [it, inserted] = merged.try_emplace(PhraseStats::bigram_key(a, b));
            if (inserted) {
              it->second.left = std::string(a);
              it->second.right = std::string(b);
              it->second.score = score;
            }
            it->second.merge_count++;
            report.merges++;
            do_merge = true;
          }
        }
      }
      if (do_merge) {
        i += 2;
      } else {
        out.emplace_back(sentence[i]);
        i += 1;
      }
    }
    out_views.assign(out.begin(), out.end());
    sink(out_views);
  }

  report.bigrams.reserve(merged.size());
  for (auto& [key, mb] : merged) report.bigrams.push_back(std::move(mb));
  std::sort(report.bigrams.begin(), report.bigrams.end(),
            [](const MergedBigram& a, const MergedBigram& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.left != b.left) return a.left < b.left;
              return a.right < b.right;
            });
  return report;
}

TokenSet find_joiner_tokens(TokenStream& in, char joiner) {
  TokenSet found;
  Sentence sentence;
  while (in.next(sentence)) {
    for (const auto& token : sentence) {
      if (token.find(joiner) != std::string_view::npos && !found.contains(token))
        found.emplace(token);
    }
  }
  return found;
}

std::vector<MergeReport> build_phrases(TokenStream& in, const PhraseConfig& config, Rng& rng,
                                       const SentenceSink& sink) {
  config.validate();

  TokenSet exempt = find_joiner_tokens(in, config.joiner);
  in.reset();

  // Multi-pass merging re-reads the corpus once per pass; keep it in memory.
  std::vector<std::vector<std::string>> buffer;
  {
    Sentence sentence;
    while (in.next(sentence)) {
      auto& copy = buffer.emplace_back();
      copy.reserve(sentence.size());
      for (auto t : sentence) copy.emplace_back(t);
    }
  }

  std::vector<MergeReport> reports;
  reports.reserve(config.iterations);
  for (uint32_t pass = 0; pass < config.iterations; pass++) {
    MemoryTokenStream current(std::move(buffer));
    PhraseStats stats = count_stats(current);
    current.reset();

    std::vector<std::vector<std::string>> next;
    next.reserve(current.size());
    const bool last = pass + 1 == config.iterations;
    reports.push_back(merge_pass(
        current, stats, config, pass, rng,
        [&](const Sentence& s) {
          if (last) {
            sink(s);
          } else {
            auto& copy = next.emplace_back();
            copy.reserve(s.size());
            for (auto t : s) copy.emplace_back(t);
          }
        },
        &exempt));
    buffer = std::move(next);
  }
  return reports;
}

void save_merge_reports(const std::vector<MergeReport>& reports, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  for (const auto& report : reports) {
    out << "#pass " << report.pass + 1 << " merges " << report.merges << '\n';
    for (const auto& mb : report.bigrams) {
      out << mb.left << '\t' << mb.right << '\t' << format_double(mb.score) << '\t'
          << mb.merge_count << '\n';
    }
  }
  out.close();
  if (!out) fail(ErrorCode::io, "error writing " + path);
}

}  // namespace dvec
