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

#include "corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace dvec {

bool Deduper::admit(const Sentence& sentence) {
  std::string joined = join_tokens(sentence);
  Fp128 fp = fingerprint128(joined);
  std::lock_guard<std::mutex> lock(mu_);
  bool fresh;
  if (exact_) {
    auto& bucket = exact_seen_[fp];
    fresh = std::find(bucket.begin(), bucket.end(), joined) == bucket.end();
    if (fresh) bucket.push_back(std::move(joined));
  } else {
    fresh = seen_.insert(fp).second;
  }
  if (fresh) {
    kept_++;
  } else {
    dropped_++;
  }
  return fresh;
}

uint64_t dedup_sentences(TokenStream& in, const SentenceSink& sink, bool exact) {
  Deduper dedup(exact);
  Sentence sentence;
  while (in.next(sentence)) {
    if (dedup.admit(sentence)) sink(sentence);
  }
  return dedup.dropped();
}

Vocab Vocab::build(TokenStream& in, uint64_t min_count) {
  if (min_count < 1) fail(ErrorCode::invalid_argument, "min_count must be >= 1");
  std::unordered_map<std::string, uint64_t, StringHash, std::equal_to<>> counts;
  Sentence sentence;
  while (in.next(sentence)) {
    for (const auto& token : sentence) {
      auto it = counts.find(token);
      if (it == counts.end()) {
        counts.emplace(std::string(token), 1);
      } else {
        it->second++;
      }
    }
  }
  std::vector<Entry> entries;
  entries.reserve(counts.size());
  for (auto& [token, count] : counts) entries.push_back(Entry{token, count});
  return from_counts(std::move(entries), min_count);
}

Vocab Vocab::from_counts(std::vector<Entry> entries, uint64_t min_count) {
  if (min_count < 1) fail(ErrorCode::invalid_argument, "min_count must be >= 1");
  Vocab v;
  v.min_count_ = min_count;
  std::erase_if(entries, [&](const Entry& e) { return e.count < min_count; });
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.token < b.token;
  });
  v.entries_ = std::move(entries);
  for (const auto& e : v.entries_) v.total_count_ += e.count;
  v.rebuild_index();
  return v;
}

void Vocab::rebuild_index() {
  index_.clear();
  index_.reserve(entries_.size());
  for (uint32_t id = 0; id < entries_.size(); id++) index_.emplace(entries_[id].token, id);
}

std::optional<uint32_t> Vocab::id_of(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Vocab::frequency(uint32_t id) const {
  if (id >= entries_.size()) fail(ErrorCode::lookup, "vocab id out of range");
  if (total_count_ == 0) fail(ErrorCode::domain, "empty vocabulary has no frequencies");
  return static_cast<double>(entries_[id].count) / static_cast<double>(total_count_);
}

std::vector<double> Vocab::discard_probs(double t) const {
  std::vector<double> probs(entries_.size());
  for (uint32_t id = 0; id < entries_.size(); id++) probs[id] = discard_prob(frequency(id), t);
  return probs;
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  out << "#total " << total_count_ << '\n';
  for (const auto& e : entries_) out << e.token << '\t' << e.count << '\n';
  out.close();
  if (!out) fail(ErrorCode::io, "error writing " + path);
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#total ", 0) != 0)
    fail(ErrorCode::parse, path + ":1: expected \"#total <count>\" header");
  uint64_t declared_total = 0;
  try {
    declared_total = std::stoull(line.substr(7));
  } catch (const std::exception&) {
    fail(ErrorCode::parse, path + ":1: bad total count");
  }
  std::vector<Entry> entries;
  uint64_t line_no = 1;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": expected token<TAB>count");
    Entry e;
    e.token = line.substr(0, tab);
    try {
      e.count = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": bad count");
    }
    entries.push_back(std::move(e));
  }
  Vocab v = from_counts(std::move(entries), 1);
  if (v.total_count() != declared_total)
    fail(ErrorCode::parse, path + ": header total " + std::to_string(declared_total) +
                               " does not match entry sum " + std::to_string(v.total_count()));
  return v;
}

double discard_prob(double f_w, double t) {
  if (!(f_w > 0.0) || f_w > 1.0) fail(ErrorCode::domain, "word frequency must be in (0, 1]");
  if (!(t > 0.0)) fail(ErrorCode::domain, "subsampling threshold must be > 0");
  return std::max(0.0, 1.0 - std::sqrt(t / f_w));
}

void subsample(TokenStream& in, const Vocab& vocab, double t, Rng& rng,
               const SentenceSink& sink) {
  std::vector<double> p_disc = vocab.discard_probs(t);
  Sentence sentence;
  Sentence kept;
  while (in.next(sentence)) {
    kept.clear();
    for (const auto& token : sentence) {
      auto id = vocab.id_of(token);
      if (!id) continue;
      if (p_disc[*id] > 0.0 && rng.next_double() < p_disc[*id]) continue;
      kept.push_back(token);
    }
    sink(kept);
  }
}

UnigramLM UnigramLM::train(TokenStream& in, const Vocab& vocab) {
  std::vector<uint64_t> counts(vocab.size(), 0);
  uint64_t total = 0;
  bool any = false;
  Sentence sentence;
  while (in.next(sentence)) {
    any = true;
    for (const auto& token : sentence) {
      if (auto id = vocab.id_of(token)) {
        counts[*id]++;
        total++;
      }
    }
  }
  if (!any) fail(ErrorCode::invalid_argument, "cannot train a unigram LM on an empty stream");

  UnigramLM lm;
  const double denom = static_cast<double>(total + vocab.size() + 1);
  for (uint32_t id = 0; id < vocab.size(); id++) {
    lm.log_probs_.emplace(vocab.entry(id).token,
                          std::log(static_cast<double>(counts[id] + 1) / denom));
  }
  lm.oov_logprob_ = std::log(1.0 / denom);
  return lm;
}

double UnigramLM::logprob(std::string_view token) const {
  auto it = log_probs_.find(token);
  return it == log_probs_.end() ? oov_logprob_ : it->second;
}

double UnigramLM::score_document(const Sentence& document) const {
  if (document.empty()) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& token : document) sum += logprob(token);
  return sum / static_cast<double>(document.size());
}

UnigramLM::Decision UnigramLM::filter(const Sentence& document, double threshold) const {
  if (document.empty()) return {false, -std::numeric_limits<double>::infinity()};
  double score = score_document(document);
  return {score >= threshold, score};
}

}  // namespace dvec
