// Copyright 2026 The utiljudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uj {

// Error hierarchy. Every failure the harness reports derives from Error so
// the CLI can map it to a nonzero exit without catching std::exception.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition or invariant of a call (wrong passage count, empty
// truth set, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Stable 64-bit key for a string (first 8 bytes of its SHA-256).
std::uint64_t stable_hash64(std::string_view data);

/// Mixes a parent seed with a label into an independent child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

// Seeded generator with platform-independent draws. The std distributions
// are implementation-defined, so bounded draws and shuffles are done here on
// top of the raw mt19937_64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). Rejection sampling on the raw 64-bit output;
  /// requires n > 0.
  std::size_t uniform_index(std::size_t n);

  /// Uniform real in [0, 1) from the top 53 bits.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

  /// Fisher-Yates, swapping i with uniform_index(i + 1) for i from the back.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace uj
