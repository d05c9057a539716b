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

#include "token_stream.h"

namespace dvec {

namespace {
inline bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}
}  // namespace

void tokenize(std::string_view line, Sentence& out) {
  out.clear();
  size_t i = 0;
  const size_t n = line.size();
  while (i < n) {
    while (i < n && is_ascii_space(line[i])) i++;
    size_t start = i;
    while (i < n && !is_ascii_space(line[i])) i++;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

std::vector<std::string> tokenize_copy(std::string_view line) {
  Sentence views;
  tokenize(line, views);
  return {views.begin(), views.end()};
}

FileTokenStream::FileTokenStream(const std::string& path) : path_(path), in_(path) {
  if (!in_) fail(ErrorCode::io, "cannot open " + path);
}

bool FileTokenStream::next(Sentence& sentence) {
  while (std::getline(in_, line_)) {
    tokenize(line_, sentence);
    return true;
  }
  return false;
}

void FileTokenStream::reset() {
  in_.clear();
  in_.seekg(0);
  if (!in_) fail(ErrorCode::io, "cannot rewind " + path_);
}

MemoryTokenStream MemoryTokenStream::from_lines(const std::vector<std::string>& lines) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(lines.size());
  for (const auto& line : lines) sentences.push_back(tokenize_copy(line));
  return MemoryTokenStream(std::move(sentences));
}

bool MemoryTokenStream::next(Sentence& sentence) {
  if (pos_ >= sentences_.size()) return false;
  const auto& src = sentences_[pos_++];
  sentence.assign(src.begin(), src.end());
  return true;
}

SentenceWriter::SentenceWriter(const std::string& path) : path_(path), out_(path) {
  if (!out_) fail(ErrorCode::io, "cannot open " + path + " for writing");
}

void SentenceWriter::write(const Sentence& sentence) {
  for (size_t i = 0; i < sentence.size(); i++) {
    if (i) out_ << ' ';
    out_ << sentence[i];
  }
  out_ << '\n';
  written_++;
}

void SentenceWriter::close() {
  out_.close();
  if (!out_) fail(ErrorCode::io, "error writing " + path_);
}

std::string join_tokens(const Sentence& sentence, char sep) {
  std::string joined;
  size_t total = 0;
  for (const auto& t : sentence) total += t.size() + 1;
  joined.reserve(total);
  for (size_t i = 0; i < sentence.size(); i++) {
    if (i) joined.push_back(sep);
    joined.append(sentence[i]);
  }
  return joined;
}

}  // namespace dvec
