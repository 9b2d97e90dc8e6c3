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

#include "oracles.hpp"
#include "uj/metrics.hpp"

namespace {

using namespace uj::metrics;
namespace t = uj::testing;

TEST(SetMetrics, WorkedExample) {
  const auto s = set_metrics<int>({1, 2, 3}, {2, 3, 4, 5});
  EXPECT_NEAR(s.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.recall, 0.5, 1e-12);
  EXPECT_NEAR(s.f1, 4.0 / 7.0, 1e-12);
}

TEST(SetMetrics, EmptySelectionAndEmptyTruth) {
  const auto s = set_metrics<int>({}, {1});
  EXPECT_EQ(s.precision, 0.0);
  EXPECT_EQ(s.recall, 0.0);
  EXPECT_EQ(s.f1, 0.0);
  EXPECT_THROW(set_metrics<int>({1}, {}), uj::ContractError);
}

TEST(RankMetrics, WorkedExample) {
  const std::vector<int> ranking = {5, 1, 7, 2};
  const std::set<int> rel = {1, 2};
  // DCG = 1/log2(3) + 1/log2(5); IDCG = 1 + 1/log2(3).
  EXPECT_NEAR(ndcg_at_k(ranking, rel, 5), 0.6509, 1e-4);
  EXPECT_NEAR(mrr_at_k(ranking, rel, 5), 0.5, 1e-12);
  EXPECT_EQ(mrr_at_k(ranking, rel, 1), 0.0);
  EXPECT_EQ(ndcg_at_k(ranking, rel, 1), 0.0);
}

TEST(RankMetrics, TwoRelevantAtRanksOneAndThree) {
  const std::vector<int> ranking = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::set<int> rel = {0, 2};
  const double want = t::oracle_ndcg(ranking, {0, 2}, 5);
  EXPECT_NEAR(ndcg_at_k(ranking, rel, 5), want, 1e-12);
  EXPECT_NEAR(ndcg_at_k(ranking, rel, 5), 0.9197, 1e-4);
  EXPECT_NEAR(mrr_at_k(std::vector<int>{4, 5, 0}, rel, 5), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(mrr_at_k(std::vector<int>{4, 5, 6, 7, 8, 0}, rel, 5), 0.0);
}

TEST(RankMetrics, PerfectRankingScoresOne) {
  const std::vector<int> ranking = {3, 4, 0, 1};
  EXPECT_NEAR(ndcg_at_k(ranking, std::set<int>{3, 4}, 5), 1.0, 1e-12);
  EXPECT_NEAR(ndcg_at_k(ranking, std::set<int>{3}, 1), 1.0, 1e-12);
}

TEST(RankMetrics, BadArguments) {
  const std::vector<int> ranking = {1};
  EXPECT_THROW(ndcg_at_k(ranking, std::set<int>{}, 5), uj::ContractError);
  EXPECT_THROW(mrr_at_k(ranking, std::set<int>{1}, 0), uj::ContractError);
}

TEST(AnswerMetrics, ExactMatchAndTokenF1) {
  const std::vector<std::string> golds = {"Barack Obama"};
  EXPECT_EQ(exact_match("barack obama.", golds), 1);
  EXPECT_EQ(exact_match("Obama", golds), 0);
  EXPECT_EQ(exact_match("The Beatles", std::vector<std::string>{"beatles"}), 1);
  EXPECT_EQ(exact_match("", std::vector<std::string>{"x"}), 0);
  EXPECT_THROW(exact_match("x", std::vector<std::string>{}), uj::ContractError);
  EXPECT_NEAR(token_f1("new york city", std::vector<std::string>{"york city"}), 0.8, 1e-12);
  const std::vector<std::string> g2 = {"red blue green"};
  // pred "red blue" vs gold "red blue green": P=1, R=2/3, F1=0.8.
  EXPECT_NEAR(token_f1("red blue", g2), 0.8, 1e-12);
  EXPECT_EQ(token_f1("", g2), 0.0);
}

TEST(AnswerMetrics, RougeAndBleuExamples) {
  // LCS("x y z", "x z w") = 2 -> P = R = 2/3.
  EXPECT_NEAR(rouge_l("x y z", "x z w"), 2.0 / 3.0, 1e-12);
  const std::vector<std::string> refs = {"x y"};
  // Clipped unigram precision 1/3, no brevity penalty.
  EXPECT_NEAR(bleu("x x x", refs, 1).at(1), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(rouge_l("", "x"), 0.0);
}

TEST(AnswerMetrics, BleuSmoothingKeepsHigherOrdersPositive) {
  const std::vector<std::string> refs = {"red blue green"};
  const auto b = bleu("red green blue", refs, 4);
  EXPECT_GT(b.at(4), 0.0);
  EXPECT_LT(b.at(4), 1e-3);
  EXPECT_NEAR(b.at(1), 1.0, 1e-12);
}

// Property tests: every kernel agrees with its brute-force oracle.

TEST(MetricOracles, SetMetricsAgree) {
  uj::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::set<int> sel, truth;
    const std::size_t n = 1 + rng.uniform_index(10);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.bernoulli(0.4)) sel.insert(static_cast<int>(i));
      if (rng.bernoulli(0.3)) truth.insert(static_cast<int>(i));
    }
    if (truth.empty()) truth.insert(0);
    const auto got = set_metrics(sel, truth);
    const auto want = t::oracle_prf({sel.begin(), sel.end()}, {truth.begin(), truth.end()});
    EXPECT_NEAR(got.precision, want.p, 1e-9);
    EXPECT_NEAR(got.recall, want.r, 1e-9);
    EXPECT_NEAR(got.f1, want.f1, 1e-9);
  }
}

TEST(MetricOracles, RankMetricsAgree) {
  uj::Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(10);
    std::vector<int> ranking(n);
    for (std::size_t i = 0; i < n; ++i) ranking[i] = static_cast<int>(i);
    rng.shuffle(ranking);
    std::vector<int> rel;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.bernoulli(0.3)) rel.push_back(static_cast<int>(i));
    }
    if (rel.empty()) rel.push_back(ranking.back());
    const std::set<int> rs(rel.begin(), rel.end());
    for (std::size_t k : {1u, 3u, 5u, 10u}) {
      EXPECT_NEAR(ndcg_at_k(ranking, rs, k), t::oracle_ndcg(ranking, rel, k), 1e-9);
      EXPECT_NEAR(mrr_at_k(ranking, rs, k), t::oracle_mrr(ranking, rel, k), 1e-9);
    }
  }
}

TEST(MetricOracles, AnswerMetricsAgree) {
  uj::Rng rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    const auto pred = t::random_tokens(rng, 0, 9);
    std::vector<t::Tokens> refs;
    std::vector<std::string> ref_strings;
    const std::size_t nrefs = 1 + rng.uniform_index(3);
    for (std::size_t r = 0; r < nrefs; ++r) {
      refs.push_back(t::random_tokens(rng, 1, 9));
      ref_strings.push_back(t::join(refs.back()));
    }
    const std::string p = t::join(pred);
    EXPECT_NEAR(token_f1(p, ref_strings), t::oracle_token_f1(pred, refs), 1e-9);
    EXPECT_NEAR(rouge_l(p, ref_strings[0]), t::oracle_rouge_l(pred, refs[0]), 1e-9);
    const auto got = bleu(p, ref_strings, 4);
    const auto want = t::oracle_bleu(pred, refs, 4, kBleuEpsilon);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(got.at(n), want.at(n), 1e-9) << "BLEU-" << n;
  }
}

TEST(MetricOracles, Bounds) {
  uj::Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string a = t::join(t::random_tokens(rng, 1, 8));
    const std::string b = t::join(t::random_tokens(rng, 1, 8));
    const std::vector<std::string> bs = {b};
    for (double v : {token_f1(a, bs), rouge_l(a, b), bleu(a, bs).at(4)}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    const std::vector<std::string> as = {a};
    EXPECT_EQ(exact_match(a, as), 1);
    EXPECT_NEAR(token_f1(a, as), 1.0, 1e-12);
    EXPECT_NEAR(rouge_l(a, a), 1.0, 1e-12);
  }
}

}  // namespace
