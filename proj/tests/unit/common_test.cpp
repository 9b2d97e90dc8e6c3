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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "uj/common.hpp"

namespace {

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(uj::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(uj::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(DeriveSeed, StableAndLabelSensitive) {
  EXPECT_EQ(uj::derive_seed(7, "a"), uj::derive_seed(7, "a"));
  EXPECT_NE(uj::derive_seed(7, "a"), uj::derive_seed(7, "b"));
  EXPECT_NE(uj::derive_seed(7, "a"), uj::derive_seed(8, "a"));
  EXPECT_NE(uj::derive_seed(7, 1), uj::derive_seed(7, 2));
}

TEST(Rng, SameSeedSameStream) {
  uj::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformIndexStaysInRange) {
  uj::Rng r(1);
  for (std::size_t n = 1; n < 50; ++n) {
    for (int i = 0; i < 20; ++i) EXPECT_LT(r.uniform_index(n), n);
  }
}

TEST(Rng, ShuffleIsAPermutation) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    uj::Rng r(seed);
    std::vector<int> v(17);
    std::iota(v.begin(), v.end(), 0);
    r.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 17; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
  }
}

TEST(Rng, SampleIndicesDistinct) {
  uj::Rng r(9);
  for (std::size_t k = 0; k <= 12; ++k) {
    auto s = r.sample_indices(12, k);
    EXPECT_EQ(s.size(), k);
    std::set<std::size_t> u(s.begin(), s.end());
    EXPECT_EQ(u.size(), k);
    for (auto i : s) EXPECT_LT(i, 12u);
  }
}

TEST(Rng, Uniform01HalfOpen) {
  uj::Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = r.uniform01();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

}  // namespace
