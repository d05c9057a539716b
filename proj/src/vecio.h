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

#include <string>
#include <vector>

#include "model.h"
#include "trainer.h"

namespace dvec {

// Everything needed to resume, evaluate or export a trained model.
struct Model {
  ModelConfig config;
  TrainConfig train_config;
  Vocab vocab;
  EmbeddingSet<float> embeddings;
};

// Text vector table: "<n> <dim>" header, then "<token> <v1> ... <vd>" rows.
struct TextVectors {
  std::vector<std::string> tokens;
  std::vector<float> matrix;  // tokens.size() x dim, row-major
  size_t dim = 0;
};

// Values are written with six significant digits, so a round trip is exact
// to about 1e-6 relative. Tokens must be space-free and values finite.
void save_text(const TextVectors& vectors, const std::string& path);
TextVectors load_text(const std::string& path);

// One composed input vector per vocab word (word vector plus subword mean),
// ready for save_text.
TextVectors compose_text_vectors(const Model& model);

// Binary container: "DVEC" magic, format version, both configs, the vocab,
// then the three matrices as little-endian float32. Round trips bitwise.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace dvec
