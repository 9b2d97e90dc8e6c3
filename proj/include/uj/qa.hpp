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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uj/clients.hpp"
#include "uj/corpus.hpp"
#include "uj/judge.hpp"
#include "uj/metrics.hpp"

namespace uj::qa {

using corpus::CandidateSet;
using corpus::DatasetKind;
using corpus::Passage;
using corpus::Question;

enum class EvidenceKind { None, Dense, GroundTruth, RelevanceJudged, UtilityJudged };
std::string_view to_string(EvidenceKind kind);
EvidenceKind parse_evidence_kind(std::string_view s);

struct EvidenceSource {
  EvidenceKind kind = EvidenceKind::None;
  std::optional<judge::JudgeConfig> judge_config;  // judged kinds only

  /// Throws ContractError when a judged kind lacks a config, the config's
  /// judgment disagrees with the kind, or a plain kind carries one.
  void validate() const;
  /// "none", "dense", "ground_truth", or the judge label.
  std::string label() const;

  friend bool operator==(const EvidenceSource&, const EvidenceSource&) = default;
};

EvidenceSource judged_source(const judge::JudgeConfig& config);

/// QA prompt. Without evidence the passage block is left out entirely.
std::string render_qa_prompt(DatasetKind kind, const Question& question,
                             std::span<const Passage> evidence);

// Judgment records by (judge label, question id).
class JudgmentStore {
 public:
  void add(judge::JudgmentRecord record);
  const judge::JudgmentRecord* find(const judge::JudgeConfig& config,
                                    std::string_view question_id) const;
  std::size_t size() const { return records_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, judge::JudgmentRecord> records_;
};

/// The listwise-set config a rank-form config borrows its evidence count
/// from: same judgment, requirement, order and seed.
judge::JudgeConfig paired_set_config(const judge::JudgeConfig& rank_config);

/// Evidence for one question. GroundTruth takes the gold passages of the
/// candidate set and fetches any other gold ids from `store`. Rank-form
/// judgments contribute the top-s passages, s being the size of the paired
/// set-form selection (or, when that run is absent, of the default
/// listwise-set run with the same judgment). Throws LookupError when a
/// needed judgment is missing.
std::vector<Passage> select_evidence(const EvidenceSource& source,
                                     const Question& question,
                                     const CandidateSet& candidates,
                                     const JudgmentStore& judgments,
                                     const corpus::PassageStore* store = nullptr);

struct AnswerRecord {
  std::string question_id;
  EvidenceSource source;
  std::vector<std::string> evidence_ids;
  std::string prompt_hash;
  std::string answer_text;
  DatasetKind scored_as = DatasetKind::FQA;
  std::optional<metrics::AnswerScore> scores;
};

/// One temperature-0 call; the answer is stored verbatim.
AnswerRecord generate_answer(const Question& question,
                             const std::vector<Passage>& evidence,
                             const EvidenceSource& source,
                             clients::ChatClient& client);

/// FQA: EM and token F1. NFQA: ROUGE-L (best gold) and BLEU-1..4 against all
/// golds.
metrics::AnswerScore score_answer(DatasetKind kind, std::string_view answer,
                                  std::span<const std::string> golds);

struct KindSection {
  std::size_t count = 0;
  // Metric name -> mean x 100.
  std::map<std::string, double> means;
};

struct EvalReport {
  // Source label -> dataset kind -> aggregates. Source labels keep first-seen
  // order in `source_order`.
  std::map<std::string, std::map<DatasetKind, KindSection>> rows;
  std::vector<std::string> source_order;
  std::size_t record_count = 0;
};

/// Scores records lacking scores and averages per source and dataset kind.
/// Throws LookupError for an unknown question and ContractError when a
/// record's scored kind differs from its question's kind.
EvalReport evaluate_answers(std::vector<AnswerRecord>& records,
                            const std::vector<Question>& questions);

/// Metric columns reported for a dataset kind, in table order.
std::vector<std::string> metric_names(DatasetKind kind);

}  // namespace uj::qa
