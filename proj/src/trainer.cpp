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

#include "trainer.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace dvec {

void TrainConfig::validate() const {
  if (!(lr0 > 0)) fail(ErrorCode::invalid_argument, "lr0 must be > 0");
  if (epochs < 1) fail(ErrorCode::invalid_argument, "epochs must be >= 1");
  if (negatives < 1) fail(ErrorCode::invalid_argument, "negatives must be >= 1");
  if (!(neg_power >= 0 && neg_power <= 1))
    fail(ErrorCode::invalid_argument, "neg_power must be in [0, 1]");
  if (threads < 1) fail(ErrorCode::invalid_argument, "threads must be >= 1");
  if (subsample_t < 0) fail(ErrorCode::invalid_argument, "subsample threshold must be >= 0");
}

NegativeSampler::NegativeSampler(const Vocab& vocab, double power) {
  if (vocab.size() == 0) fail(ErrorCode::invalid_argument, "empty vocab");
  cumulative_.resize(vocab.size());
  double running = 0;
  for (uint32_t id = 0; id < vocab.size(); id++) {
    running += std::pow(static_cast<double>(vocab.entry(id).count), power);
    cumulative_[id] = running;
  }
}

int32_t NegativeSampler::sample(Rng& rng) const {
  double r = rng.next_double() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  if (it == cumulative_.end()) --it;
  return static_cast<int32_t>(it - cumulative_.begin());
}

void sample_negatives(const NegativeSampler& sampler, uint32_t k, int32_t exclude, Rng& rng,
                      std::vector<int32_t>& out) {
  if (sampler.size() < 2)
    fail(ErrorCode::invalid_argument, "need at least 2 vocab words to sample with exclusion");
  out.clear();
  out.reserve(k);
  for (uint32_t i = 0; i < k; i++) {
    int32_t drawn;
    do {
      drawn = sampler.sample(rng);
    } while (drawn == exclude);
    out.push_back(drawn);
  }
}

EncodedCorpus encode_corpus(TokenStream& in, const Vocab& vocab) {
  EncodedCorpus corpus;
  corpus.offsets.push_back(0);
  Sentence sentence;
  while (in.next(sentence)) {
    for (const auto& token : sentence) {
      auto id = vocab.id_of(token);
      if (id) corpus.tokens.push_back(static_cast<int32_t>(*id));
    }
    corpus.offsets.push_back(corpus.tokens.size());
  }
  return corpus;
}

std::string format_epoch_line(const EpochStats& stats) {
  return "epoch " + std::to_string(stats.epoch) + " loss " + format_double(stats.mean_loss) +
         " tokens_per_sec " + format_double(stats.tokens_per_sec);
}

TrainResult train(const EncodedCorpus& corpus, const Vocab& vocab, const TrainConfig& config,
                  const ModelConfig& model_config, const EpochCallback& on_epoch) {
  config.validate();
  model_config.validate();
  if (corpus.tokens.empty()) fail(ErrorCode::invalid_argument, "empty corpus");

  std::optional<SubwordIndex> subword_index;
  const SubwordIndex* subwords = nullptr;
  if (model_config.use_subwords) {
    subword_index.emplace(SubwordIndex::build(vocab, model_config));
    subwords = &*subword_index;
  }

  TrainResult result{EmbeddingSet<float>::create(model_config, vocab.size(), config.seed), {}};
  auto& emb = result.embeddings;

  NegativeSampler sampler(vocab, config.neg_power);

  std::vector<double> discard;
  if (config.subsample_t > 0) discard = vocab.discard_probs(config.subsample_t);

  const uint64_t total_tokens =
      static_cast<uint64_t>(corpus.tokens.size()) * static_cast<uint64_t>(config.epochs);
  std::atomic<uint64_t> processed{0};
  const size_t sentences = corpus.sentences();

  for (uint32_t epoch = 0; epoch < config.epochs; epoch++) {
    std::vector<double> worker_loss(config.threads, 0.0);
    std::vector<uint64_t> worker_steps(config.threads, 0);
    auto started = std::chrono::steady_clock::now();

    // Workers share the embedding matrices without locks; concurrent row
    // writes may lose updates, which asynchronous SGD tolerates. Only the
    // progress counter below is synchronized (relaxed).
    auto worker_fn = [&](uint32_t w) {
      Rng rng(Rng::derive_seed(config.seed, epoch, w));
      StepScratch<float> scratch;
      std::vector<int32_t> kept;
      const size_t begin = sentences * w / config.threads;
      const size_t end = sentences * (w + 1) / config.threads;
      double loss_sum = 0;
      uint64_t steps = 0;
      for (size_t s = begin; s < end; s++) {
        const int32_t* sent = corpus.tokens.data() + corpus.offsets[s];
        const size_t len = corpus.offsets[s + 1] - corpus.offsets[s];
        if (len == 0) continue;
        uint64_t done = processed.fetch_add(len, std::memory_order_relaxed) + len;
        double remaining = 1.0 - static_cast<double>(done) / static_cast<double>(total_tokens);
        float lr = static_cast<float>(config.lr0 * std::max(remaining, 1e-4));

        kept.clear();
        if (discard.empty()) {
          kept.assign(sent, sent + len);
        } else {
          for (size_t i = 0; i < len; i++)
            if (!(rng.next_double() < discard[sent[i]])) kept.push_back(sent[i]);
        }

        for (size_t i = 0; i < kept.size(); i++) {
          uint32_t half_width = model_config.window;
          if (config.dynamic_window && !model_config.use_position_weights)
            half_width = 1 + static_cast<uint32_t>(rng.next_below(model_config.window));
          auto loss = step(emb, subwords, model_config, sampler, kept.data(), kept.size(), i,
                           half_width, lr, config.negatives, rng, scratch);
          if (loss) {
            loss_sum += *loss;
            steps++;
          }
        }
      }
      worker_loss[w] = loss_sum;
      worker_steps[w] = steps;
    };

    if (config.threads == 1) {
      worker_fn(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(config.threads);
      for (uint32_t w = 0; w < config.threads; w++) pool.emplace_back(worker_fn, w);
      for (auto& th : pool) th.join();
    }

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    double loss_total = 0;
    uint64_t step_total = 0;
    for (uint32_t w = 0; w < config.threads; w++) {
      loss_total += worker_loss[w];
      step_total += worker_steps[w];
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.mean_loss = step_total > 0 ? loss_total / static_cast<double>(step_total) : 0.0;
    stats.tokens_per_sec =
        elapsed > 0 ? static_cast<double>(corpus.tokens.size()) / elapsed : 0.0;
    result.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

}  // namespace dvec
