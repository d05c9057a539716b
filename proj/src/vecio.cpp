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

#include "vecio.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>

namespace dvec {

namespace {

constexpr char kMagic[4] = {'D', 'V', 'E', 'C'};
constexpr uint32_t kFormatVersion = 1;

class ByteWriter {
 public:
  explicit ByteWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) fail(ErrorCode::io, "cannot open " + path + " for writing");
  }

  void bytes(const void* data, size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u8(uint8_t v) { bytes(&v, 1); }
  void u32(uint32_t v) {
    uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
    bytes(b, 4);
  }
  void u64(uint64_t v) {
    u32(static_cast<uint32_t>(v));
    u32(static_cast<uint32_t>(v >> 32));
  }
  void f32(float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

  void close() {
    out_.close();
    if (!out_) fail(ErrorCode::io, "error writing " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) fail(ErrorCode::io, "cannot open " + path);
  }

  void bytes(void* data, size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n)
      fail(ErrorCode::format, path_ + ": truncated model file");
  }
  uint8_t u8() {
    uint8_t v;
    bytes(&v, 1);
    return v;
  }
  uint32_t u32() {
    uint8_t b[4];
    bytes(b, 4);
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
  }
  uint64_t u64() {
    uint64_t lo = u32();
    uint64_t hi = u32();
    return lo | hi << 32;
  }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  double f64() {
    uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string str() {
    uint32_t n = u32();
    if (n > (1u << 20)) fail(ErrorCode::format, path_ + ": implausible string length");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  bool at_eof() {
    return in_.peek() == std::char_traits<char>::eof();
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
};

void write_matrix(ByteWriter& w, const std::vector<float>& m, uint64_t rows, uint64_t cols) {
  w.u64(rows);
  w.u64(cols);
  static_assert(sizeof(float) == 4);
  if constexpr (std::endian::native == std::endian::little) {
    w.bytes(m.data(), m.size() * 4);
  } else {
    for (float v : m) w.f32(v);
  }
}

std::vector<float> read_matrix(ByteReader& r, uint64_t expect_rows, uint64_t expect_cols) {
  uint64_t rows = r.u64();
  uint64_t cols = r.u64();
  if (rows != expect_rows || cols != expect_cols)
    fail(ErrorCode::format, r.path() + ": matrix shape does not match the stored config");
  std::vector<float> m(rows * cols);
  if constexpr (std::endian::native == std::endian::little) {
    r.bytes(m.data(), m.size() * 4);
  } else {
    for (auto& v : m) v = r.f32();
  }
  return m;
}

}  // namespace

void save_text(const TextVectors& vectors, const std::string& path) {
  if (vectors.dim == 0 && !vectors.tokens.empty())
    fail(ErrorCode::invalid_argument, "vector dimension must be >= 1");
  if (vectors.matrix.size() != vectors.tokens.size() * vectors.dim)
    fail(ErrorCode::invalid_argument, "vector matrix size does not match token count");

  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
  out << vectors.tokens.size() << ' ' << vectors.dim << '\n';
  for (size_t i = 0; i < vectors.tokens.size(); i++) {
    const std::string& token = vectors.tokens[i];
    if (token.empty() || token.find(' ') != std::string::npos ||
        token.find('\t') != std::string::npos || token.find('\n') != std::string::npos)
      fail(ErrorCode::invalid_argument, "token not serializable as text: \"" + token + "\"");
    out << token;
    const float* row = vectors.matrix.data() + i * vectors.dim;
    for (size_t j = 0; j < vectors.dim; j++) {
      if (!std::isfinite(row[j]))
        fail(ErrorCode::domain, "non-finite value in row for \"" + token + "\"");
      out << ' ' << format_double(row[j]);
    }
    out << '\n';
  }
  out.close();
  if (!out) fail(ErrorCode::io, "error writing " + path);
}

TextVectors load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);

  auto where = [&](uint64_t line_no) { return path + ":" + std::to_string(line_no); };
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::parse, path + ": missing header");

  uint64_t count = 0, dim = 0;
  {
    char* end = nullptr;
    count = std::strtoull(line.c_str(), &end, 10);
    if (end == line.c_str() || *end != ' ')
      fail(ErrorCode::parse, where(1) + ": malformed header \"" + line + "\"");
    char* end2 = nullptr;
    dim = std::strtoull(end + 1, &end2, 10);
    if (end2 == end + 1 || *end2 != '\0')
      fail(ErrorCode::parse, where(1) + ": malformed header \"" + line + "\"");
  }
  if (count > 0 && dim == 0) fail(ErrorCode::parse, where(1) + ": zero dimension");

  TextVectors vectors;
  vectors.dim = dim;
  vectors.tokens.reserve(count);
  vectors.matrix.reserve(count * dim);

  uint64_t line_no = 1;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) continue;
    if (vectors.tokens.size() == count)
      fail(ErrorCode::parse, where(line_no) + ": more rows than the header promises");
    size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0)
      fail(ErrorCode::parse, where(line_no) + ": expected \"<token> <values...>\"");
    vectors.tokens.push_back(line.substr(0, sp));

    const char* cursor = line.c_str() + sp;
    for (uint64_t j = 0; j < dim; j++) {
      char* end = nullptr;
      float v = std::strtof(cursor, &end);
      if (end == cursor)
        fail(ErrorCode::parse, where(line_no) + ": expected " + std::to_string(dim) +
                                   " values, found " + std::to_string(j));
      vectors.matrix.push_back(v);
      cursor = end;
    }
    while (*cursor == ' ') cursor++;
    if (*cursor != '\0')
      fail(ErrorCode::parse, where(line_no) + ": more than " + std::to_string(dim) + " values");
  }
  if (vectors.tokens.size() != count)
    fail(ErrorCode::parse, path + ": header promises " + std::to_string(count) +
                               " rows, file has " + std::to_string(vectors.tokens.size()));
  return vectors;
}

TextVectors compose_text_vectors(const Model& model) {
  TextVectors vectors;
  vectors.dim = model.embeddings.dim;
  vectors.tokens.reserve(model.vocab.size());
  vectors.matrix.resize(static_cast<size_t>(model.vocab.size()) * vectors.dim);

  std::optional<SubwordIndex> index;
  const SubwordIndex* subwords = nullptr;
  if (model.config.use_subwords) {
    index.emplace(SubwordIndex::build(model.vocab, model.config));
    subwords = &*index;
  }
  for (uint32_t id = 0; id < model.vocab.size(); id++) {
    vectors.tokens.push_back(model.vocab.entry(id).token);
    compose_input(model.embeddings, subwords, id, vectors.matrix.data() + size_t(id) * vectors.dim);
  }
  return vectors;
}

void save_model(const Model& model, const std::string& path) {
  ByteWriter w(path);
  w.bytes(kMagic, 4);
  w.u32(kFormatVersion);

  const ModelConfig& mc = model.config;
  w.u32(mc.dim);
  w.u32(mc.window);
  w.u8(mc.use_position_weights ? 1 : 0);
  w.u8(mc.use_subwords ? 1 : 0);
  w.u32(mc.minn);
  w.u32(mc.maxn);
  w.u32(mc.buckets);
  w.u32(mc.negatives);

  const TrainConfig& tc = model.train_config;
  w.f64(tc.lr0);
  w.u32(tc.epochs);
  w.f64(tc.subsample_t);
  w.u32(tc.negatives);
  w.f64(tc.neg_power);
  w.u32(tc.threads);
  w.u64(tc.seed);
  w.u8(tc.dynamic_window ? 1 : 0);

  w.u32(model.vocab.size());
  w.u64(model.vocab.min_count());
  for (uint32_t id = 0; id < model.vocab.size(); id++) {
    const auto& entry = model.vocab.entry(id);
    w.str(entry.token);
    w.u64(entry.count);
  }

  const auto& emb = model.embeddings;
  write_matrix(w, emb.input, emb.input.size() / emb.dim, emb.dim);
  write_matrix(w, emb.output, emb.output.size() / emb.dim, emb.dim);
  write_matrix(w, emb.positions, emb.positions.size() / (emb.dim ? emb.dim : 1), emb.dim);
  w.close();
}

Model load_model(const std::string& path) {
  ByteReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorCode::format, path + ": not a model file (bad magic)");
  uint32_t version = r.u32();
  if (version != kFormatVersion)
    fail(ErrorCode::format,
         path + ": unsupported model format version " + std::to_string(version));

  Model model;
  ModelConfig& mc = model.config;
  mc.dim = r.u32();
  mc.window = r.u32();
  mc.use_position_weights = r.u8() != 0;
  mc.use_subwords = r.u8() != 0;
  mc.minn = r.u32();
  mc.maxn = r.u32();
  mc.buckets = r.u32();
  mc.negatives = r.u32();
  mc.validate();

  TrainConfig& tc = model.train_config;
  tc.lr0 = r.f64();
  tc.epochs = r.u32();
  tc.subsample_t = r.f64();
  tc.negatives = r.u32();
  tc.neg_power = r.f64();
  tc.threads = r.u32();
  tc.seed = r.u64();
  tc.dynamic_window = r.u8() != 0;

  uint32_t vocab_size = r.u32();
  uint64_t min_count = r.u64();
  std::vector<Vocab::Entry> entries;
  entries.reserve(vocab_size);
  for (uint32_t i = 0; i < vocab_size; i++) {
    Vocab::Entry entry;
    entry.token = r.str();
    entry.count = r.u64();
    entries.push_back(std::move(entry));
  }
  model.vocab = Vocab::from_counts(std::move(entries), min_count);
  if (model.vocab.size() != vocab_size)
    fail(ErrorCode::format, path + ": vocab entries below the stored min_count");

  auto& emb = model.embeddings;
  emb.vocab_rows = vocab_size;
  emb.dim = mc.dim;
  emb.window = mc.window;
  uint64_t input_rows = uint64_t(vocab_size) + (mc.use_subwords ? mc.buckets : 0);
  emb.input = read_matrix(r, input_rows, mc.dim);
  emb.output = read_matrix(r, vocab_size, mc.dim);
  emb.positions = read_matrix(r, mc.use_position_weights ? uint64_t(2) * mc.window : 0, mc.dim);
  if (!r.at_eof()) fail(ErrorCode::format, path + ": trailing bytes after model data");
  return model;
}

}  // namespace dvec
