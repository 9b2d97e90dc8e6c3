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

#include "uj/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "uj/corpus.hpp"

namespace uj::metrics {

namespace detail {

void check_rank_args(std::size_t relevant_size, std::size_t k) {
  if (relevant_size == 0) throw ContractError("ranking metric: empty relevant set");
  if (k == 0) throw ContractError("ranking metric: k must be >= 1");
}

double discount(std::size_t rank) {
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace detail

namespace {

void require_golds(std::span<const std::string> golds) {
  if (golds.empty()) throw ContractError("answer metric: no gold answers");
}

using Tokens = std::vector<std::string>;

double f1_pair(const Tokens& pred, const Tokens& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / pred.size();
  const double r = static_cast<double>(common) / gold.size();
  return 2.0 * p * r / (p + r);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::map<Tokens, int> ngram_counts(const Tokens& tokens, int n) {
  std::map<Tokens, int> out;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++out[Tokens(tokens.begin() + i, tokens.begin() + i + len)];
  }
  return out;
}

}  // namespace

int exact_match(std::string_view prediction,
                std::span<const std::string> golds) {
  require_golds(golds);
  const std::string pred = corpus::normalize_text(prediction);
  for (const auto& g : golds) {
    if (corpus::normalize_text(g) == pred) return 1;
  }
  return 0;
}

double token_f1(std::string_view prediction,
                std::span<const std::string> golds) {
  require_golds(golds);
  const Tokens pred = corpus::normalized_tokens(prediction);
  double best = 0.0;
  for (const auto& g : golds) {
    best = std::max(best, f1_pair(pred, corpus::normalized_tokens(g)));
  }
  return best;
}

double rouge_l(std::string_view prediction, std::string_view reference) {
  const Tokens pred = corpus::normalized_tokens(prediction);
  const Tokens ref = corpus::normalized_tokens(reference);
  if (pred.empty() && ref.empty()) return 1.0;
  if (pred.empty() || ref.empty()) return 0.0;
  const double lcs = static_cast<double>(lcs_length(pred, ref));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / pred.size();
  const double r = lcs / ref.size();
  return 2.0 * p * r / (p + r);
}

std::map<int, double> bleu(std::string_view prediction,
                           std::span<const std::string> references,
                           int max_n) {
  if (references.empty()) throw ContractError("bleu: no references");
  if (max_n < 1) throw ContractError("bleu: max_n must be >= 1");
  std::map<int, double> out;
  const Tokens pred = corpus::normalized_tokens(prediction);
  if (pred.empty()) {
    for (int n = 1; n <= max_n; ++n) out[n] = 0.0;
    return out;
  }
  std::vector<Tokens> refs;
  for (const auto& r : references) refs.push_back(corpus::normalized_tokens(r));

  const std::size_t c = pred.size();
  std::size_t r = refs.front().size();
  for (const auto& ref : refs) {
    const auto d_new = std::llabs(static_cast<long long>(ref.size()) - static_cast<long long>(c));
    const auto d_old = std::llabs(static_cast<long long>(r) - static_cast<long long>(c));
    if (d_new < d_old || (d_new == d_old && ref.size() < r)) r = ref.size();
  }
  const double bp =
      c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto pred_counts = ngram_counts(pred, n);
    std::map<Tokens, int> max_ref;
    for (const auto& ref : refs) {
      for (const auto& [g, cnt] : ngram_counts(ref, n)) {
        max_ref[g] = std::max(max_ref[g], cnt);
      }
    }
    long total = 0;
    long clipped = 0;
    for (const auto& [g, cnt] : pred_counts) {
      total += cnt;
      auto it = max_ref.find(g);
      if (it != max_ref.end()) clipped += std::min(cnt, it->second);
    }
    double p = total == 0 ? 0.0 : static_cast<double>(clipped) / total;
    if (p == 0.0) p = kBleuEpsilon;
    log_sum += std::log(p);
    out[n] = bp * std::exp(log_sum / n);
  }
  return out;
}

}  // namespace uj::metrics
