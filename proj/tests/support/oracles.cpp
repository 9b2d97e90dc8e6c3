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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace uj::testing {

namespace {

bool member(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool is_subsequence(const Tokens& sub, const Tokens& of) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < of.size() && j < sub.size(); ++i) {
    if (of[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

std::vector<Tokens> ngrams(const Tokens& t, int n) {
  std::vector<Tokens> out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= t.size(); ++i) {
    out.emplace_back(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(i) + n);
  }
  return out;
}

}  // namespace

Prf oracle_prf(const std::vector<int>& selected, const std::vector<int>& truth) {
  int hit = 0;
  for (int s : selected) hit += member(truth, s) ? 1 : 0;
  Prf out;
  if (!selected.empty()) out.p = static_cast<double>(hit) / static_cast<double>(selected.size());
  out.r = static_cast<double>(hit) / static_cast<double>(truth.size());
  if (hit > 0) out.f1 = 2.0 / (1.0 / out.p + 1.0 / out.r);
  return out;
}

double oracle_ndcg(const std::vector<int>& ranking, const std::vector<int>& relevant,
                   std::size_t k) {
  auto gain_sum = [&](const std::vector<int>& gains) {
    double s = 0;
    for (std::size_t i = 0; i < gains.size() && i < k; ++i) {
      s += gains[i] * (std::log(2.0) / std::log(static_cast<double>(i) + 2.0));
    }
    return s;
  };
  std::vector<int> gains;
  for (int id : ranking) gains.push_back(member(relevant, id) ? 1 : 0);
  std::vector<int> ideal(relevant.size(), 1);
  return gain_sum(gains) / gain_sum(ideal);
}

double oracle_mrr(const std::vector<int>& ranking, const std::vector<int>& relevant,
                  std::size_t k) {
  double best = 0;
  for (std::size_t i = ranking.size(); i-- > 0;) {
    if (i < k && member(relevant, ranking[i])) best = 1.0 / static_cast<double>(i + 1);
  }
  return best;
}

std::size_t oracle_lcs(const Tokens& a, const Tokens& b) {
  const Tokens& shorter = a.size() <= b.size() ? a : b;
  const Tokens& longer = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::size_t n = shorter.size();
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    Tokens sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1UL << i)) sub.push_back(shorter[i]);
    }
    if (sub.size() > best && is_subsequence(sub, longer)) best = sub.size();
  }
  return best;
}

double oracle_rouge_l(const Tokens& pred, const Tokens& ref) {
  if (pred.empty() && ref.empty()) return 1.0;
  if (pred.empty() || ref.empty()) return 0.0;
  const double l = static_cast<double>(oracle_lcs(pred, ref));
  if (l == 0) return 0.0;
  const double p = l / static_cast<double>(pred.size());
  const double r = l / static_cast<double>(ref.size());
  return 2.0 / (1.0 / p + 1.0 / r);
}

double oracle_token_f1(const Tokens& pred, const std::vector<Tokens>& golds) {
  double best = 0;
  for (const Tokens& g : golds) {
    double f = 0;
    if (pred.empty() && g.empty()) {
      f = 1;
    } else if (!pred.empty() && !g.empty()) {
      Tokens a = pred;
      Tokens b = g;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      Tokens common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        const double p = static_cast<double>(common.size()) / static_cast<double>(pred.size());
        const double r = static_cast<double>(common.size()) / static_cast<double>(g.size());
        f = 2.0 / (1.0 / p + 1.0 / r);
      }
    }
    best = std::max(best, f);
  }
  return best;
}

std::map<int, double> oracle_bleu(const Tokens& pred, const std::vector<Tokens>& refs,
                                  int max_n, double epsilon) {
  std::map<int, double> out;
  if (pred.empty()) {
    for (int n = 1; n <= max_n; ++n) out[n] = 0.0;
    return out;
  }
  // Closest reference length, shorter on ties.
  std::size_t r = 0;
  long best_diff = -1;
  for (const Tokens& ref : refs) {
    const long d = std::labs(static_cast<long>(ref.size()) - static_cast<long>(pred.size()));
    if (best_diff < 0 || d < best_diff || (d == best_diff && ref.size() < r)) {
      best_diff = d;
      r = ref.size();
    }
  }
  const double c = static_cast<double>(pred.size());
  const double bp = c > static_cast<double>(r) || c == static_cast<double>(r)
                        ? 1.0
                        : std::exp(1.0 - static_cast<double>(r) / c);
  std::vector<double> precisions;
  for (int n = 1; n <= max_n; ++n) {
    const auto grams = ngrams(pred, n);
    double clipped = 0;
    std::vector<Tokens> done;
    for (const Tokens& g : grams) {
      if (std::find(done.begin(), done.end(), g) != done.end()) continue;
      done.push_back(g);
      const auto count = std::count(grams.begin(), grams.end(), g);
      long max_ref = 0;
      for (const Tokens& ref : refs) {
        const auto rg = ngrams(ref, n);
        max_ref = std::max<long>(max_ref, std::count(rg.begin(), rg.end(), g));
      }
      clipped += static_cast<double>(std::min<long>(count, max_ref));
    }
    double p = grams.empty() ? 0.0 : clipped / static_cast<double>(grams.size());
    if (p == 0.0) p = epsilon;
    precisions.push_back(p);
    double prod = 1.0;
    for (double q : precisions) prod *= q;
    out[n] = bp * std::pow(prod, 1.0 / n);
  }
  return out;
}

Tokens random_tokens(Rng& rng, std::size_t min_len, std::size_t max_len, std::size_t vocab) {
  static const Tokens kVocab = {"red", "blue", "green", "cat", "dog", "sun",
                                "moon", "tree", "river", "stone", "wind", "fire"};
  const std::size_t len = min_len + rng.uniform_index(max_len - min_len + 1);
  Tokens out;
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(kVocab[rng.uniform_index(std::min(vocab, kVocab.size()))]);
  }
  return out;
}

std::string join(const Tokens& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) out += ' ';
    out += t[i];
  }
  return out;
}

}  // namespace uj::testing
