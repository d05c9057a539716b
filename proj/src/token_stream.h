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

#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "util.h"

namespace dvec {

// A sentence as served by a TokenStream. Views are valid until the next
// call to next() or reset() on the owning stream.
using Sentence = std::vector<std::string_view>;

// Receives processed sentences; views are only valid during the call.
using SentenceSink = std::function<void(const Sentence&)>;

// Splits a line on runs of ASCII whitespace. Empty tokens are dropped; no
// other normalization is applied. Views point into `line`.
void tokenize(std::string_view line, Sentence& out);

std::vector<std::string> tokenize_copy(std::string_view line);

// One sentence per line. Iteration is repeatable: reset() rewinds to the
// first sentence and a second pass yields the identical sequence.
class TokenStream {
 public:
  virtual ~TokenStream() = default;
  virtual bool next(Sentence& sentence) = 0;
  virtual void reset() = 0;
};

class FileTokenStream : public TokenStream {
 public:
  explicit FileTokenStream(const std::string& path);
  bool next(Sentence& sentence) override;
  void reset() override;

 private:
  std::string path_;
  std::ifstream in_;
  std::string line_;
};

class MemoryTokenStream : public TokenStream {
 public:
  MemoryTokenStream() = default;
  explicit MemoryTokenStream(std::vector<std::vector<std::string>> sentences)
      : sentences_(std::move(sentences)) {}

  // Convenience for tests: each string is one sentence, tokenized on add.
  static MemoryTokenStream from_lines(const std::vector<std::string>& lines);

  void add(std::vector<std::string> sentence) { sentences_.push_back(std::move(sentence)); }
  bool next(Sentence& sentence) override;
  void reset() override { pos_ = 0; }
  size_t size() const { return sentences_.size(); }
  const std::vector<std::vector<std::string>>& sentences() const { return sentences_; }

 private:
  std::vector<std::vector<std::string>> sentences_;
  size_t pos_ = 0;
};

// Writes sentences back out, space-joined, one per line, LF endings.
class SentenceWriter {
 public:
  explicit SentenceWriter(const std::string& path);
  void write(const Sentence& sentence);
  void close();
  uint64_t written() const { return written_; }

 private:
  std::string path_;
  std::ofstream out_;
  uint64_t written_ = 0;
};

std::string join_tokens(const Sentence& sentence, char sep = ' ');

}  // namespace dvec
