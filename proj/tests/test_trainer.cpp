#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <map>
#include <vector>

#include "support/helpers.h"
#include "trainer.h"

using namespace dvec;

namespace {

EncodedCorpus encode(const std::vector<std::vector<std::string>>& sentences, const Vocab& vocab) {
  MemoryTokenStream in(sentences);
  return encode_corpus(in, vocab);
}

Vocab vocab_of(const std::vector<std::vector<std::string>>& sentences, uint64_t min_count = 1) {
  MemoryTokenStream in(sentences);
  return Vocab::build(in, min_count);
}

}  // namespace

TEST_CASE("pair loss at zero scores is per classifier log two") {
  ModelConfig config;
  config.dim = 2;
  auto emb = EmbeddingSet<double>::create(config, 4, 1);  // outputs start at zero
  double h[2] = {0.5, 0.5};
  std::vector<int32_t> negs{1, 2, 3};
  CHECK(pair_loss(emb, h, 0, negs) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("pair loss with one negative at score one") {
  ModelConfig config;
  config.dim = 2;
  auto emb = EmbeddingSet<double>::create(config, 2, 1);
  emb.output_row(1)[0] = 1.0;
  emb.output_row(1)[1] = 1.0;
  double h[2] = {0.5, 0.5};
  std::vector<int32_t> negs{1};
  // softplus(0) + softplus(1)
  CHECK(pair_loss(emb, h, 0, negs) == doctest::Approx(2.006408868078168).epsilon(1e-12));
}

TEST_CASE("pair loss saturates cleanly at extreme scores") {
  CHECK(softplus(-40.0) <= 1e-15);
  CHECK(softplus(40.0) == doctest::Approx(40.0).epsilon(1e-12));
  ModelConfig config;
  config.dim = 1;
  auto emb = EmbeddingSet<double>::create(config, 2, 1);
  emb.output_row(0)[0] = 40.0;
  emb.output_row(1)[0] = -40.0;
  double h[1] = {1.0};
  std::vector<int32_t> negs{1};
  // Confident right answers: loss is tiny but still non-negative.
  double loss = pair_loss(emb, h, 0, negs);
  CHECK(loss >= 0.0);
  CHECK(loss <= 2e-15);
}

TEST_CASE("analytic gradients match finite differences everywhere") {
  // Random small configurations covering every feature combination, swept
  // over every parameter with central differences.
  Rng rng(2024);
  int checked = 0;
  for (int round = 0; round < 6; round++) {
    for (int pos = 0; pos < 2; pos++) {
      for (int sub = 0; sub < 2; sub++) {
        ModelConfig config;
        config.dim = 2 + rng.next_below(7);  // up to 8
        config.window = 1 + rng.next_below(3);
        config.use_position_weights = pos == 1;
        config.use_subwords = sub == 1;
        config.minn = 2;
        config.maxn = 3;
        config.buckets = 16 + static_cast<uint32_t>(rng.next_below(16));
        const size_t vocab_size = 5 + rng.next_below(8);

        std::vector<std::vector<std::string>> sentences;
        sentences.push_back({});
        for (size_t w = 0; w < vocab_size; w++) sentences[0].push_back("w" + std::to_string(w));
        Vocab vocab = vocab_of(sentences);
        SubwordIndex subwords;
        if (config.use_subwords) subwords = SubwordIndex::build(vocab, config);

        const size_t len = 5 + rng.next_below(4);
        std::vector<int32_t> sentence(len);
        for (auto& t : sentence) t = static_cast<int32_t>(rng.next_below(vocab_size));
        const size_t center = rng.next_below(len);
        const auto half_width = static_cast<uint32_t>(1 + rng.next_below(config.window));

        std::vector<int32_t> negatives;
        for (int i = 0; i < 3; i++)
          negatives.push_back(static_cast<int32_t>(rng.next_below(vocab_size)));
        negatives.push_back(negatives.back());  // duplicated draw is legal

        double err = testsupport::gradient_check(
            config, vocab.size(), sentence, center, half_width, negatives,
            config.use_subwords ? &subwords : nullptr, 1000 + round);
        CHECK(err < 1e-4);
        checked++;
      }
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("a step moves parameters by exactly minus lr times the gradient") {
  ModelConfig config;
  config.dim = 6;
  config.window = 2;
  config.use_position_weights = true;
  auto base = EmbeddingSet<double>::create(config, 8, 3);
  Rng rng(5);
  for (auto& v : base.output) v = rng.next_double() - 0.5;

  std::vector<int32_t> sentence{0, 1, 2, 3, 4};
  std::vector<int32_t> negatives{5, 6, 6};
  StepScratch<double> scratch;

  auto unit = base;
  REQUIRE(compose_step_context(unit, nullptr, config, sentence.data(), 5, 2, 2, scratch));
  apply_step(unit, nullptr, config, sentence[2], negatives, 1.0, scratch);

  const double lr = 0.025;
  auto stepped = base;
  REQUIRE(compose_step_context(stepped, nullptr, config, sentence.data(), 5, 2, 2, scratch));
  apply_step(stepped, nullptr, config, sentence[2], negatives, lr, scratch);

  auto check_matrix = [&](const std::vector<double>& b, const std::vector<double>& u,
                          const std::vector<double>& s) {
    for (size_t i = 0; i < b.size(); i++) {
      double grad = b[i] - u[i];
      CHECK(s[i] == doctest::Approx(b[i] - lr * grad).epsilon(1e-12));
    }
  };
  check_matrix(base.input, unit.input, stepped.input);
  check_matrix(base.output, unit.output, stepped.output);
  check_matrix(base.positions, unit.positions, stepped.positions);
}

TEST_CASE("a zero learning rate step changes nothing") {
  ModelConfig config;
  config.dim = 4;
  config.window = 2;
  auto emb = EmbeddingSet<double>::create(config, 6, 9);
  auto before = emb;
  std::vector<int32_t> sentence{0, 1, 2};
  std::vector<int32_t> negatives{3, 4};
  StepScratch<double> scratch;
  REQUIRE(compose_step_context(emb, nullptr, config, sentence.data(), 3, 1, 2, scratch));
  double loss = apply_step(emb, nullptr, config, sentence[1], negatives, 0.0, scratch);
  CHECK(loss >= 0.0);
  CHECK(emb.input == before.input);
  CHECK(emb.output == before.output);
}

TEST_CASE("repeated steps on one example drive its loss down") {
  ModelConfig config;
  config.dim = 8;
  config.window = 2;
  auto emb = EmbeddingSet<double>::create(config, 10, 11);
  std::vector<int32_t> sentence{1, 2, 3, 4, 5};
  std::vector<int32_t> negatives{7, 8};
  StepScratch<double> scratch;

  REQUIRE(compose_step_context(emb, nullptr, config, sentence.data(), 5, 2, 2, scratch));
  double first = apply_step(emb, nullptr, config, sentence[2], negatives, 0.1, scratch);
  double last = first;
  for (int i = 0; i < 50; i++) {
    REQUIRE(compose_step_context(emb, nullptr, config, sentence.data(), 5, 2, 2, scratch));
    last = apply_step(emb, nullptr, config, sentence[2], negatives, 0.1, scratch);
  }
  CHECK(last < first);
  CHECK(last >= 0.0);
}

TEST_CASE("empty contexts are skipped without drawing negatives") {
  ModelConfig config;
  config.dim = 4;
  config.window = 2;
  auto emb = EmbeddingSet<double>::create(config, 6, 1);
  std::vector<std::vector<std::string>> sentences{{"w0", "w0", "w0"}};
  Vocab vocab = vocab_of(sentences);
  NegativeSampler sampler_src(vocab_of({{"w0"}, {"w1"}, {"w2"}}), 0.75);

  std::vector<int32_t> lone{0};
  StepScratch<double> scratch;
  Rng rng(1);
  uint64_t before = rng.next_u64();
  Rng rng2(1);
  CHECK(rng2.next_u64() == before);  // same stream

  Rng step_rng(1);
  auto loss = step(emb, nullptr, config, sampler_src, lone.data(), 1, 0, 2, 0.05, 2, step_rng,
                   scratch);
  CHECK_FALSE(loss.has_value());
  CHECK(step_rng.next_u64() == before);  // untouched stream
}

TEST_CASE("negative sampler follows the three quarters power distribution") {
  std::vector<Vocab::Entry> entries{{"big", 81}, {"small", 16}};
  Vocab vocab = Vocab::from_counts(entries, 1);
  NegativeSampler sampler(vocab, 0.75);
  Rng rng(31);
  uint64_t hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; i++)
    if (sampler.sample(rng) == 0) hits++;
  // 81^.75 : 16^.75 = 27 : 8
  CHECK(static_cast<double>(hits) / draws == doctest::Approx(27.0 / 35.0).epsilon(0.03));
}

TEST_CASE("power zero with an excluded word is a coin flip over the rest") {
  std::vector<Vocab::Entry> entries{{"a", 1000}, {"b", 10}, {"c", 1}};
  Vocab vocab = Vocab::from_counts(entries, 1);
  NegativeSampler sampler(vocab, 0.0);
  Rng rng(41);
  std::map<int32_t, int> counts;
  std::vector<int32_t> out;
  const int rounds = 50000;
  for (int i = 0; i < rounds; i++) {
    sample_negatives(sampler, 1, 0, rng, out);
    counts[out[0]]++;
  }
  CHECK(counts[0] == 0);
  CHECK(static_cast<double>(counts[1]) / rounds == doctest::Approx(0.5).epsilon(0.04));
  CHECK(static_cast<double>(counts[2]) / rounds == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("negative sampling needs at least two words") {
  std::vector<Vocab::Entry> entries{{"only", 5}};
  Vocab vocab = Vocab::from_counts(entries, 1);
  NegativeSampler sampler(vocab, 0.75);
  Rng rng(1);
  std::vector<int32_t> out;
  CHECK_THROWS_AS(sample_negatives(sampler, 2, 0, rng, out), Error);
}

TEST_CASE("train config validation") {
  TrainConfig config;
  CHECK_NOTHROW(config.validate());
  config.epochs = 0;
  CHECK_THROWS_AS(config.validate(), Error);
  config = TrainConfig{};
  config.lr0 = 0.0;
  CHECK_THROWS_AS(config.validate(), Error);
  config = TrainConfig{};
  config.threads = 0;
  CHECK_THROWS_AS(config.validate(), Error);
  config = TrainConfig{};
  config.subsample_t = -1.0;
  CHECK_THROWS_AS(config.validate(), Error);
}

TEST_CASE("corpus encoding drops out of vocab tokens and keeps offsets") {
  std::vector<std::vector<std::string>> sentences{{"a", "zz", "b"}, {"zz"}, {"b", "a"}};
  Vocab vocab = vocab_of({{"a", "a", "b"}});
  EncodedCorpus corpus = encode(sentences, vocab);
  REQUIRE(corpus.sentences() == 3);
  CHECK(corpus.tokens.size() == 4);
  CHECK(corpus.offsets == std::vector<uint64_t>{0, 2, 2, 4});
  auto a = vocab.id_of("a");
  auto b = vocab.id_of("b");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(corpus.tokens[0] == static_cast<int32_t>(*a));
  CHECK(corpus.tokens[1] == static_cast<int32_t>(*b));
}

TEST_CASE("epoch lines use fixed wording and six significant digits") {
  EpochStats stats;
  stats.epoch = 2;
  stats.mean_loss = 0.123456789;
  stats.tokens_per_sec = 45678.9;
  CHECK(format_epoch_line(stats) == "epoch 2 loss 0.123457 tokens_per_sec 45678.9");
}

TEST_CASE("training runs, reports epochs, and stays finite") {
  auto sentences = testsupport::zipf_sentences(4000, 40, 8, 55);
  Vocab vocab = vocab_of(sentences);
  EncodedCorpus corpus = encode(sentences, vocab);

  TrainConfig config;
  config.epochs = 3;
  config.negatives = 3;
  config.subsample_t = 0;  // tiny corpus: keep everything
  config.seed = 4;
  ModelConfig mc;
  mc.dim = 12;
  mc.window = 3;

  std::vector<uint32_t> seen;
  TrainResult result = train(corpus, vocab, config, mc,
                             [&](const EpochStats& s) { seen.push_back(s.epoch); });
  CHECK(seen == std::vector<uint32_t>{1, 2, 3});
  REQUIRE(result.epochs.size() == 3);
  for (const auto& e : result.epochs) {
    CHECK(e.mean_loss >= 0.0);
    CHECK(e.tokens_per_sec > 0.0);
  }
  CHECK(result.embeddings.finite());
  CHECK(result.embeddings.input.size() == vocab.size() * 12u);
}

TEST_CASE("training twice with one thread reproduces matrices bitwise") {
  auto sentences = testsupport::zipf_sentences(3000, 30, 7, 77);
  Vocab vocab = vocab_of(sentences);
  EncodedCorpus corpus = encode(sentences, vocab);

  TrainConfig config;
  config.epochs = 2;
  config.negatives = 4;
  config.threads = 1;
  config.seed = 1234;
  ModelConfig mc;
  mc.dim = 10;
  mc.window = 4;
  mc.use_position_weights = true;

  TrainResult a = train(corpus, vocab, config, mc);
  TrainResult b = train(corpus, vocab, config, mc);
  CHECK(std::memcmp(a.embeddings.input.data(), b.embeddings.input.data(),
                    a.embeddings.input.size() * sizeof(float)) == 0);
  CHECK(std::memcmp(a.embeddings.output.data(), b.embeddings.output.data(),
                    a.embeddings.output.size() * sizeof(float)) == 0);
  CHECK(std::memcmp(a.embeddings.positions.data(), b.embeddings.positions.data(),
                    a.embeddings.positions.size() * sizeof(float)) == 0);

  TrainConfig other = config;
  other.seed = 1235;
  TrainResult c = train(corpus, vocab, other, mc);
  CHECK(a.embeddings.input != c.embeddings.input);
}

TEST_CASE("training rejects an empty corpus") {
  Vocab vocab = vocab_of({{"a", "b"}});
  EncodedCorpus corpus;
  TrainConfig config;
  ModelConfig mc;
  mc.dim = 4;
  CHECK_THROWS_AS(train(corpus, vocab, config, mc), Error);
}
