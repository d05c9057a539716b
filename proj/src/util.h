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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dvec {

enum class ErrorCode {
  invalid_argument = 1,
  io = 2,
  parse = 3,
  domain = 4,
  lookup = 5,
  format = 6,
  internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Seeded generator used everywhere randomness appears. Draw helpers avoid
// std::*_distribution so that sequences are stable across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound), bound > 0.
  uint64_t next_below(uint64_t bound) { return engine_() % bound; }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

  float next_float() { return static_cast<float>(next_double()); }

  // Deterministically derived child seed, for per-worker/per-epoch streams.
  static uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) +
                 0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

// 32-bit FNV-1a over raw bytes.
inline uint32_t fnv1a32(std::string_view bytes) {
  uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

struct Fp128 {
  uint64_t hi = 0;
  uint64_t lo = 0;
  bool operator==(const Fp128&) const = default;
};

struct Fp128Hash {
  size_t operator()(const Fp128& f) const { return f.hi ^ (f.lo * 0x9e3779b97f4a7c15ULL); }
};

// MurmurHash3 x64 128-bit fingerprint of a byte string.
Fp128 fingerprint128(std::string_view bytes);

template <typename Real>
inline Real sigmoid(Real x) {
  return Real(1) / (Real(1) + std::exp(-x));
}

// log(1 + e^x) without overflow for large |x|.
template <typename Real>
inline Real softplus(Real x) {
  if (x > Real(0)) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Heterogeneous string hashing for token maps keyed by std::string.
struct StringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

using TokenSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

std::string format_double(double v, int significant_digits = 6);

}  // namespace dvec
