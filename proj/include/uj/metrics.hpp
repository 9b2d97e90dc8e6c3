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

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uj/common.hpp"

namespace uj::metrics {

struct SetScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RankScore {
  std::map<std::size_t, double> ndcg_at;
  std::map<std::size_t, double> mrr_at;
};

struct AnswerScore {
  int em = 0;
  double token_f1 = 0.0;
  double rouge_l = 0.0;
  std::map<int, double> bleu;  // n -> BLEU-n
};

/// Precision/recall/F1 of `selected` against `truth`. Precision is 0 for an
/// empty selection. Throws ContractError on an empty truth set.
template <typename Id>
SetScore set_metrics(const std::set<Id>& selected, const std::set<Id>& truth) {
  if (truth.empty()) throw ContractError("set_metrics: empty truth set");
  std::size_t hit = 0;
  for (const Id& id : selected) hit += truth.count(id);
  SetScore s;
  s.precision = selected.empty() ? 0.0
                                 : static_cast<double>(hit) / selected.size();
  s.recall = static_cast<double>(hit) / truth.size();
  const double denom = s.precision + s.recall;
  s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
  return s;
}

/// Binary-gain NDCG@k. IDCG places min(k, |relevant|) relevant items first,
/// so rankings that omit relevant items are penalized.
template <typename Id>
double ndcg_at_k(std::span<const Id> ranking, const std::set<Id>& relevant,
                 std::size_t k);

/// 1/r for the first relevant item at rank r <= k, else 0.
template <typename Id>
double mrr_at_k(std::span<const Id> ranking, const std::set<Id>& relevant,
                std::size_t k);

namespace detail {
void check_rank_args(std::size_t relevant_size, std::size_t k);
double discount(std::size_t rank);  // 1 / log2(rank + 1), rank 1-based
}  // namespace detail

template <typename Id>
double ndcg_at_k(std::span<const Id> ranking, const std::set<Id>& relevant,
                 std::size_t k) {
  detail::check_rank_args(relevant.size(), k);
  double dcg = 0.0;
  const std::size_t depth = std::min(k, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (relevant.count(ranking[i]) != 0) dcg += detail::discount(i + 1);
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += detail::discount(i + 1);
  return dcg / idcg;
}

template <typename Id>
double mrr_at_k(std::span<const Id> ranking, const std::set<Id>& relevant,
                std::size_t k) {
  detail::check_rank_args(relevant.size(), k);
  const std::size_t depth = std::min(k, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (relevant.count(ranking[i]) != 0) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

template <typename Id>
double ndcg_at_k(const std::vector<Id>& ranking, const std::set<Id>& relevant,
                 std::size_t k) {
  return ndcg_at_k(std::span<const Id>(ranking), relevant, k);
}

template <typename Id>
double mrr_at_k(const std::vector<Id>& ranking, const std::set<Id>& relevant,
                std::size_t k) {
  return mrr_at_k(std::span<const Id>(ranking), relevant, k);
}

// ---- answer quality ----
//
// All answer metrics tokenize with corpus::normalized_tokens (lowercase, no
// ASCII punctuation, no articles).

int exact_match(std::string_view prediction,
                std::span<const std::string> golds);

/// Max over golds of token-overlap F1 with multiset intersection. A pair
/// whose sides are both empty after normalization scores 1.
double token_f1(std::string_view prediction,
                std::span<const std::string> golds);

/// LCS-based F-measure with beta = 1. Both sides empty scores 1; one side
/// empty scores 0.
double rouge_l(std::string_view prediction, std::string_view reference);

inline constexpr double kBleuEpsilon = 1e-9;

/// Sentence BLEU-1..max_n. Clipped modified n-gram precision, brevity
/// penalty against the closest reference length (shorter on ties), and zero
/// precisions replaced by kBleuEpsilon. An empty prediction scores 0.
std::map<int, double> bleu(std::string_view prediction,
                           std::span<const std::string> references,
                           int max_n = 4);

}  // namespace uj::metrics
