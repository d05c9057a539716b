#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "model.h"
#include "trainer.h"
#include "util.h"

namespace testsupport {

// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "dvec_test_XXXXXX").string();
    char* made = ::mkdtemp(tmpl.data());
    if (made == nullptr) throw std::runtime_error("mkdtemp failed");
    path = made;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read failed: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read failed: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Sentences of words "w0".."w<vocab-1>" with rank drawn log-uniformly, so the
// token frequencies fall off roughly like 1/rank.
inline std::vector<std::vector<std::string>> zipf_sentences(size_t n_tokens, size_t vocab,
                                                            size_t sentence_len, uint64_t seed) {
  dvec::Rng rng(seed);
  const double log_v = std::log(static_cast<double>(vocab));
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> current;
  for (size_t i = 0; i < n_tokens; i++) {
    auto rank = static_cast<size_t>(std::exp(rng.next_double() * log_v));
    if (rank > vocab) rank = vocab;
    current.push_back("w" + std::to_string(rank - 1));
    if (current.size() == sentence_len) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

inline std::string sentences_to_text(const std::vector<std::vector<std::string>>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    for (size_t i = 0; i < s.size(); i++) {
      if (i) out += ' ';
      out += s[i];
    }
    out += '\n';
  }
  return out;
}

// Central finite differences of the step loss against the analytic gradient
// recovered from a unit-lr update. Sweeps every parameter. Returns the
// largest |fd - analytic| / max(1, |fd|, |analytic|).
inline double gradient_check(const dvec::ModelConfig& config, size_t vocab_size,
                             const std::vector<int32_t>& sentence, size_t center,
                             uint32_t half_width, const std::vector<int32_t>& negatives,
                             const dvec::SubwordIndex* subwords, uint64_t seed,
                             double h = 1e-4) {
  using ES = dvec::EmbeddingSet<double>;
  ES base = ES::create(config, vocab_size, seed);
  // Zero-initialized output rows make every score zero; nudge them so the
  // check exercises a generic point.
  {
    dvec::Rng rng(seed + 17);
    for (auto& v : base.output) v = (rng.next_double() - 0.5) * 0.2;
    for (auto& v : base.input) v = (rng.next_double() - 0.5) * 0.2;
    for (auto& v : base.positions) v = 0.05 + rng.next_double() * 0.2;
  }

  const int32_t target = sentence[center];
  dvec::StepScratch<double> scratch;

  // Analytic gradient: theta - theta' after a unit-lr step.
  ES stepped = base;
  if (!dvec::compose_step_context(stepped, subwords, config, sentence.data(), sentence.size(),
                                  center, half_width, scratch))
    throw std::runtime_error("gradient_check: empty context");
  dvec::apply_step(stepped, subwords, config, target, negatives, 1.0, scratch);

  auto loss_at = [&](const ES& emb) {
    dvec::StepScratch<double> local;
    if (!dvec::compose_step_context(emb, subwords, config, sentence.data(), sentence.size(),
                                    center, half_width, local))
      throw std::runtime_error("gradient_check: empty context");
    return dvec::pair_loss(emb, local.h.data(), static_cast<size_t>(target),
                           std::span<const int32_t>(negatives));
  };

  auto sweep = [&](std::vector<double> ES::* member) {
    double worst = 0.0;
    auto& base_m = base.*member;
    auto& stepped_m = stepped.*member;
    for (size_t i = 0; i < base_m.size(); i++) {
      double analytic = base_m[i] - stepped_m[i];
      ES probe = base;
      (probe.*member)[i] = base_m[i] + h;
      double up = loss_at(probe);
      (probe.*member)[i] = base_m[i] - h;
      double down = loss_at(probe);
      double fd = (up - down) / (2.0 * h);
      double denom = std::max({1.0, std::fabs(fd), std::fabs(analytic)});
      worst = std::max(worst, std::fabs(fd - analytic) / denom);
    }
    return worst;
  };

  double worst = sweep(&ES::input);
  worst = std::max(worst, sweep(&ES::output));
  worst = std::max(worst, sweep(&ES::positions));
  return worst;
}

}  // namespace testsupport
