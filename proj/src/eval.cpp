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

#include "eval.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "token_stream.h"

namespace dvec {

namespace {

void normalize_row(float* row, size_t dim) {
  double norm = 0;
  for (size_t j = 0; j < dim; j++) norm += static_cast<double>(row[j]) * row[j];
  norm = std::sqrt(norm);
  if (norm == 0) return;  // zero rows stay zero, cosine 0 against everything
  float inv = static_cast<float>(1.0 / norm);
  for (size_t j = 0; j < dim; j++) row[j] *= inv;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

double dot(const float* a, const float* b, size_t dim) {
  double s = 0;
  for (size_t j = 0; j < dim; j++) s += static_cast<double>(a[j]) * b[j];
  return s;
}

}  // namespace

VectorSet VectorSet::from_model(const Vocab& vocab, const ModelConfig& config,
                                const EmbeddingSet<float>& emb) {
  VectorSet vs;
  vs.dim_ = emb.dim;
  vs.tokens_.reserve(vocab.size());
  for (uint32_t id = 0; id < vocab.size(); id++) vs.tokens_.push_back(vocab.entry(id).token);
  vs.rows_.resize(static_cast<size_t>(vocab.size()) * emb.dim);

  std::optional<SubwordIndex> index;
  const SubwordIndex* subwords = nullptr;
  if (config.use_subwords) {
    index.emplace(SubwordIndex::build(vocab, config));
    subwords = &*index;
  }
  for (uint32_t id = 0; id < vocab.size(); id++) {
    float* row = vs.rows_.data() + static_cast<size_t>(id) * emb.dim;
    compose_input(emb, subwords, id, row);
    normalize_row(row, emb.dim);
  }
  for (uint32_t id = 0; id < vocab.size(); id++) vs.index_.emplace(vs.tokens_[id], id);

  vs.vocab_ = &vocab;
  vs.config_ = &config;
  vs.emb_ = &emb;
  return vs;
}

VectorSet VectorSet::from_rows(std::vector<std::string> tokens, std::vector<float> matrix,
                               size_t dim) {
  if (dim == 0) fail(ErrorCode::invalid_argument, "vector dimension must be >= 1");
  if (matrix.size() != tokens.size() * dim)
    fail(ErrorCode::invalid_argument, "vector matrix size does not match token count");
  VectorSet vs;
  vs.dim_ = dim;
  vs.tokens_ = std::move(tokens);
  vs.rows_ = std::move(matrix);
  for (size_t i = 0; i < vs.tokens_.size(); i++) normalize_row(vs.rows_.data() + i * dim, dim);
  for (uint32_t id = 0; id < vs.tokens_.size(); id++) vs.index_.emplace(vs.tokens_[id], id);
  return vs;
}

std::optional<uint32_t> VectorSet::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool VectorSet::resolve(std::string_view token, float* out) const {
  if (auto id = find(token)) {
    const float* r = row(*id);
    std::copy(r, r + dim_, out);
    return true;
  }
  if (emb_ == nullptr || config_ == nullptr || !config_->use_subwords) return false;
  auto grams = char_ngrams(token, config_->minn, config_->maxn);
  if (grams.empty()) return false;
  std::fill(out, out + dim_, 0.0f);
  const float inv = 1.0f / static_cast<float>(grams.size());
  for (const auto& g : grams) {
    const float* x = emb_->input_row(emb_->vocab_rows + hash_ngram(g, config_->buckets));
    for (size_t j = 0; j < dim_; j++) out[j] += inv * x[j];
  }
  normalize_row(out, dim_);
  return true;
}

AnalogySet load_analogy_file(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  AnalogySet set;
  std::string line;
  uint64_t line_no = 0;
  int32_t current = -1;
  bool syntactic = false;
  Sentence fields;
  while (std::getline(in, line)) {
    line_no++;
    tokenize(line, fields);
    if (fields.empty()) continue;
    if (fields[0][0] == ':') {
      std::string name;
      if (fields[0].size() > 1)
        name = std::string(fields[0].substr(1));
      else if (fields.size() > 1)
        name = std::string(fields[1]);
      syntactic = name.rfind("gram", 0) == 0;
      current = static_cast<int32_t>(set.sections.size());
      set.sections.push_back(std::move(name));
      continue;
    }
    if (fields.size() != 4)
      fail(ErrorCode::parse,
           path + ":" + std::to_string(line_no) + ": expected 4 tokens, got " +
               std::to_string(fields.size()));
    if (current < 0) {
      current = static_cast<int32_t>(set.sections.size());
      set.sections.push_back("unsectioned");
      syntactic = false;
    }
    AnalogyItem item;
    item.a = lowercase ? ascii_lower(fields[0]) : std::string(fields[0]);
    item.b = lowercase ? ascii_lower(fields[1]) : std::string(fields[1]);
    item.c = lowercase ? ascii_lower(fields[2]) : std::string(fields[2]);
    item.d = lowercase ? ascii_lower(fields[3]) : std::string(fields[3]);
    item.section = static_cast<uint32_t>(current);
    item.syntactic = syntactic;
    set.items.push_back(std::move(item));
  }
  return set;
}

std::optional<size_t> analogy_predict(const VectorSet& vectors, std::string_view a,
                                      std::string_view b, std::string_view c,
                                      bool exclude_inputs) {
  auto ia = vectors.find(a);
  auto ib = vectors.find(b);
  auto ic = vectors.find(c);
  if (!ia || !ib || !ic) return std::nullopt;

  const size_t dim = vectors.dim();
  std::vector<float> target(dim);
  const float* xa = vectors.row(*ia);
  const float* xb = vectors.row(*ib);
  const float* xc = vectors.row(*ic);
  for (size_t j = 0; j < dim; j++) target[j] = xb[j] - xa[j] + xc[j];

  // Rows are unit length, so ranking by dot ranks by cosine.
  double best = -std::numeric_limits<double>::infinity();
  size_t best_idx = vectors.size();
  for (size_t w = 0; w < vectors.size(); w++) {
    if (exclude_inputs && (w == *ia || w == *ib || w == *ic)) continue;
    double s = dot(vectors.row(w), target.data(), dim);
    if (s > best) {
      best = s;
      best_idx = w;
    }
  }
  if (best_idx == vectors.size()) return std::nullopt;  // vocab was only {a,b,c}
  return best_idx;
}

AnalogyReport analogy_accuracy(const AnalogySet& set, const VectorSet& vectors,
                               bool exclude_inputs) {
  AnalogyReport report;
  report.sections.resize(set.sections.size());
  for (size_t s = 0; s < set.sections.size(); s++) report.sections[s].name = set.sections[s];

  for (const auto& item : set.items) {
    auto& sec = report.sections[item.section];
    sec.syntactic = item.syntactic;
    auto expected = vectors.find(item.d);
    std::optional<size_t> predicted;
    if (expected) predicted = analogy_predict(vectors, item.a, item.b, item.c, exclude_inputs);
    if (!expected || !predicted) {
      sec.oov++;
      report.oov++;
      continue;
    }
    sec.answered++;
    bool correct = *predicted == *expected;
    if (correct) sec.correct++;
    if (item.syntactic) {
      report.syn_answered++;
      if (correct) report.syn_correct++;
    } else {
      report.sem_answered++;
      if (correct) report.sem_correct++;
    }
  }
  auto ratio = [](uint64_t num, uint64_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  report.sem_acc = ratio(report.sem_correct, report.sem_answered);
  report.syn_acc = ratio(report.syn_correct, report.syn_answered);
  report.total_acc =
      ratio(report.sem_correct + report.syn_correct, report.sem_answered + report.syn_answered);
  return report;
}

std::string format_analogy_report(const AnalogyReport& report) {
  std::ostringstream out;
  auto pct = [](double v) { return format_double(100.0 * v); };
  for (const auto& sec : report.sections) {
    double acc = sec.answered > 0
                     ? static_cast<double>(sec.correct) / static_cast<double>(sec.answered)
                     : 0.0;
    out << sec.name << ": " << pct(acc) << "% (" << sec.correct << "/" << sec.answered
        << ", oov " << sec.oov << ")\n";
  }
  out << "semantic: " << pct(report.sem_acc) << "% (" << report.sem_correct << "/"
      << report.sem_answered << ")\n";
  out << "syntactic: " << pct(report.syn_acc) << "% (" << report.syn_correct << "/"
      << report.syn_answered << ")\n";
  out << "total: " << pct(report.total_acc) << "% ("
      << report.sem_correct + report.syn_correct << "/"
      << report.sem_answered + report.syn_answered << ", oov " << report.oov << ")\n";
  return out.str();
}

std::vector<SimilarityPair> load_similarity_file(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::vector<SimilarityPair> pairs;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) continue;
    auto where = [&] { return path + ":" + std::to_string(line_no); };
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      fail(ErrorCode::parse, where() + ": expected w1<TAB>w2<TAB>score");
    SimilarityPair pair;
    pair.w1 = line.substr(0, t1);
    pair.w2 = line.substr(t1 + 1, t2 - t1 - 1);
    if (pair.w1.empty() || pair.w2.empty()) fail(ErrorCode::parse, where() + ": empty token");
    std::string score_text = line.substr(t2 + 1);
    char* end = nullptr;
    pair.gold = std::strtod(score_text.c_str(), &end);
    if (end == score_text.c_str() || !std::isfinite(pair.gold))
      fail(ErrorCode::parse, where() + ": bad score \"" + score_text + "\"");
    if (lowercase) {
      pair.w1 = ascii_lower(pair.w1);
      pair.w2 = ascii_lower(pair.w2);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size(), 0.0);
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) j++;
    double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; k++) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) fail(ErrorCode::invalid_argument, "length mismatch");
  if (xs.size() < 2) fail(ErrorCode::invalid_argument, "need at least 2 pairs");
  auto rx = average_ranks(xs);
  auto ry = average_ranks(ys);
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rx.size(); i++) {
    double dx = rx[i] - mx;
    double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0)
    fail(ErrorCode::domain, "rank variance is zero, correlation undefined");
  return sxy / std::sqrt(sxx * syy);
}

SimilarityResult similarity_spearman(const std::vector<SimilarityPair>& pairs,
                                     const VectorSet& vectors) {
  SimilarityResult result;
  std::vector<double> model_scores, gold_scores;
  std::vector<float> v1(vectors.dim()), v2(vectors.dim());
  for (const auto& pair : pairs) {
    if (!vectors.resolve(pair.w1, v1.data()) || !vectors.resolve(pair.w2, v2.data())) {
      result.skipped++;
      continue;
    }
    model_scores.push_back(dot(v1.data(), v2.data(), vectors.dim()));
    gold_scores.push_back(pair.gold);
  }
  result.scored = model_scores.size();
  if (result.scored < 2)
    fail(ErrorCode::invalid_argument, "fewer than 2 scorable similarity pairs");
  result.spearman = spearman_correlation(model_scores, gold_scores);
  return result;
}

std::vector<Neighbor> nearest_neighbors(const VectorSet& vectors, std::string_view query,
                                        size_t k) {
  std::vector<float> q(vectors.dim());
  if (!vectors.resolve(query, q.data()))
    fail(ErrorCode::lookup, "cannot resolve query token: " + std::string(query));

  std::vector<std::pair<double, size_t>> scored;
  scored.reserve(vectors.size());
  for (size_t w = 0; w < vectors.size(); w++) {
    if (vectors.token(w) == query) continue;
    scored.emplace_back(dot(vectors.row(w), q.data(), vectors.dim()), w);
  }
  auto better = [&](const std::pair<double, size_t>& a, const std::pair<double, size_t>& b) {
    if (a.first != b.first) return a.first > b.first;
    return vectors.token(a.second) < vectors.token(b.second);
  };
  if (k < scored.size()) {
    std::partial_sort(scored.begin(), scored.begin() + static_cast<ptrdiff_t>(k), scored.end(),
                      better);
    scored.resize(k);
  } else {
    std::sort(scored.begin(), scored.end(), better);
  }
  std::vector<Neighbor> out;
  out.reserve(scored.size());
  for (const auto& [cos, w] : scored) out.push_back({vectors.token(w), cos});
  return out;
}

}  // namespace dvec
