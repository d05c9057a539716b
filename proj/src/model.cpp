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

#include "model.h"

namespace dvec {

void ModelConfig::validate() const {
  if (dim < 1) fail(ErrorCode::invalid_argument, "dim must be >= 1");
  if (window < 1) fail(ErrorCode::invalid_argument, "window must be >= 1");
  if (minn < 1 || minn > maxn) fail(ErrorCode::invalid_argument, "need 1 <= minn <= maxn");
  if (use_subwords && buckets < 1)
    fail(ErrorCode::invalid_argument, "buckets must be >= 1 with subwords on");
  if (negatives < 1) fail(ErrorCode::invalid_argument, "negatives must be >= 1");
}

std::vector<std::string> char_ngrams(std::string_view word, uint32_t minn, uint32_t maxn) {
  std::vector<std::string> out;
  std::string wrapped;
  wrapped.reserve(word.size() + 2);
  wrapped.push_back('<');
  wrapped.append(word);
  wrapped.push_back('>');

  TokenSet seen;
  for (size_t start = 0; start < wrapped.size(); start++) {
    for (size_t len = minn; len <= maxn && start + len <= wrapped.size(); len++) {
      if (len == wrapped.size()) continue;  // the whole word has its own vector
      std::string_view g = std::string_view(wrapped).substr(start, len);
      if (seen.emplace(g).second) out.emplace_back(g);
    }
  }
  return out;
}

uint32_t hash_ngram(std::string_view ngram, uint32_t buckets) {
  if (buckets < 1) fail(ErrorCode::invalid_argument, "buckets must be >= 1");
  return fnv1a32(ngram) % buckets;
}

SubwordIndex SubwordIndex::build(const Vocab& vocab, const ModelConfig& config) {
  config.validate();
  SubwordIndex index;
  index.offsets_.reserve(vocab.size() + 1);
  index.offsets_.push_back(0);
  for (size_t id = 0; id < vocab.size(); id++) {
    for (const auto& g : char_ngrams(vocab.entry(id).token, config.minn, config.maxn))
      index.rows_.push_back(static_cast<uint32_t>(vocab.size()) + hash_ngram(g, config.buckets));
    index.offsets_.push_back(index.rows_.size());
  }
  return index;
}

}  // namespace dvec
