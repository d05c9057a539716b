#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "support/helpers.h"

using testsupport::TempDir;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string cli_path() {
  const char* path = std::getenv("DVEC_CLI_PATH");
  REQUIRE_MESSAGE(path != nullptr, "DVEC_CLI_PATH must point at the built binary");
  return path;
}

RunResult run(const std::string& args) {
  std::string command = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.output.append(buffer, n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace

TEST_CASE("no arguments prints usage and exits one") {
  auto result = run("");
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("Usage") != std::string::npos);
}

TEST_CASE("unknown subcommands exit one") {
  auto result = run("frobnicate");
  CHECK(result.exit_code == 1);
}

TEST_CASE("help exits zero") {
  auto result = run("--help");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("train") != std::string::npos);
}

TEST_CASE("dedup subcommand") {
  TempDir tmp;
  testsupport::write_file(tmp.file("in.txt"), "x y\nx y\nz\n");
  auto result = run("dedup -i " + tmp.file("in.txt") + " -o " + tmp.file("out.txt"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("dropped 1") != std::string::npos);
  CHECK(testsupport::read_file(tmp.file("out.txt")) == "x y\nz\n");
}

TEST_CASE("missing input files exit two") {
  TempDir tmp;
  auto result = run("dedup -i " + tmp.file("absent.txt") + " -o " + tmp.file("out.txt"));
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("error") != std::string::npos);
}

TEST_CASE("invalid flag combinations exit one before any work") {
  TempDir tmp;
  testsupport::write_file(tmp.file("c.txt"), "a b\n");
  auto result = run("train -i " + tmp.file("c.txt") + " -o " + tmp.file("m.bin") +
                    " --subwords --minn 7 --maxn 6");
  CHECK(result.exit_code == 1);
  auto result2 = run("train -i " + tmp.file("c.txt") + " -o " + tmp.file("m.bin") +
                     " --epochs 0");
  CHECK(result2.exit_code == 1);
  auto result3 = run("phrases -i " + tmp.file("c.txt") + " -o " + tmp.file("o.txt") +
                     " --phrase-keep-prob 0");
  CHECK(result3.exit_code == 1);
}

TEST_CASE("the full pipeline runs end to end") {
  TempDir tmp;
  auto sentences = testsupport::zipf_sentences(12000, 25, 8, 3);
  testsupport::write_file(tmp.file("raw.txt"), testsupport::sentences_to_text(sentences));

  auto dedup = run("dedup -i " + tmp.file("raw.txt") + " -o " + tmp.file("dedup.txt"));
  REQUIRE(dedup.exit_code == 0);

  auto phrases = run("phrases -i " + tmp.file("dedup.txt") + " -o " + tmp.file("phrased.txt") +
                     " --phrase-iters 1 --seed 5");
  REQUIRE(phrases.exit_code == 0);
  CHECK(phrases.output.find("merges") != std::string::npos);

  auto vocab = run("vocab -i " + tmp.file("phrased.txt") + " -o " + tmp.file("vocab.txt") +
                   " --min-count 2");
  REQUIRE(vocab.exit_code == 0);

  auto train = run("train -i " + tmp.file("phrased.txt") + " -o " + tmp.file("model.bin") +
                   " --vocab " + tmp.file("vocab.txt") +
                   " --dim 10 --window 3 --neg 3 --epochs 2 --t 0 --seed 7");
  REQUIRE_MESSAGE(train.exit_code == 0, train.output);
  CHECK(train.output.find("epoch 1 loss") != std::string::npos);
  CHECK(train.output.find("epoch 2 loss") != std::string::npos);
  CHECK(train.output.find("tokens_per_sec") != std::string::npos);

  auto exported = run("export --model " + tmp.file("model.bin") + " -o " + tmp.file("vec.txt"));
  REQUIRE(exported.exit_code == 0);
  auto lines = testsupport::read_lines(tmp.file("vec.txt"));
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0].find(" 10") != std::string::npos);

  auto nn = run("nn --model " + tmp.file("model.bin") + " --query w0 -k 3");
  REQUIRE_MESSAGE(nn.exit_code == 0, nn.output);
  CHECK(std::count(nn.output.begin(), nn.output.end(), '\n') == 3);

  auto nn_text = run("nn --vectors " + tmp.file("vec.txt") + " --query w0 -k 3");
  REQUIRE(nn_text.exit_code == 0);

  testsupport::write_file(tmp.file("q.txt"), ": sec\nw0 w1 w2 w3\n");
  auto analogy = run("eval-analogy --model " + tmp.file("model.bin") + " --questions " +
                     tmp.file("q.txt"));
  REQUIRE_MESSAGE(analogy.exit_code == 0, analogy.output);
  CHECK(analogy.output.find("total") != std::string::npos);

  testsupport::write_file(tmp.file("pairs.txt"), "w0\tw1\t5\nw1\tw2\t3\nw2\tw3\t1\n");
  auto sim = run("eval-sim --model " + tmp.file("model.bin") + " --pairs " +
                 tmp.file("pairs.txt"));
  REQUIRE_MESSAGE(sim.exit_code == 0, sim.output);
  CHECK(sim.output.find("spearman") != std::string::npos);
  CHECK(sim.output.find("scored 3") != std::string::npos);
}

TEST_CASE("filter subcommand keeps plausible lines") {
  TempDir tmp;
  testsupport::write_file(tmp.file("lm.txt"), "the cat sat\nthe dog sat\n");
  testsupport::write_file(tmp.file("in.txt"), "the cat\nzzq qqz\n");
  auto result = run("filter -i " + tmp.file("in.txt") + " -o " + tmp.file("out.txt") +
                    " --lm-corpus " + tmp.file("lm.txt") + " --threshold -2.0");
  REQUIRE_MESSAGE(result.exit_code == 0, result.output);
  CHECK(testsupport::read_file(tmp.file("out.txt")) == "the cat\n");
}

TEST_CASE("pos weights flip the default window to fifteen") {
  TempDir tmp;
  auto sentences = testsupport::zipf_sentences(400, 10, 40, 11);
  testsupport::write_file(tmp.file("c.txt"), testsupport::sentences_to_text(sentences));

  // Window 15 with position weighting writes 30 position rows; the model file
  // stores them, so a reopened model keeps the widened window.
  auto train = run("train -i " + tmp.file("c.txt") + " -o " + tmp.file("m.bin") +
                   " --pos-weights --dim 4 --neg 2 --epochs 1 --t 0 --min-count 1");
  REQUIRE_MESSAGE(train.exit_code == 0, train.output);

  auto train2 = run("train -i " + tmp.file("c.txt") + " -o " + tmp.file("m5.bin") +
                    " --pos-weights --window 4 --dim 4 --neg 2 --epochs 1 --t 0 --min-count 1");
  REQUIRE_MESSAGE(train2.exit_code == 0, train2.output);

  // Distinguish them through the export header plus binary sizes: the wider
  // window model is strictly larger on disk by the extra position rows.
  auto size15 = testsupport::read_file(tmp.file("m.bin")).size();
  auto size4 = testsupport::read_file(tmp.file("m5.bin")).size();
  CHECK(size15 == size4 + (30 - 8) * 4 * 4);
}
