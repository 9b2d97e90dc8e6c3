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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uj/clients.hpp"
#include "uj/corpus.hpp"

namespace uj::judge {

using corpus::CandidateSet;
using corpus::Passage;
using corpus::Question;

enum class Form { Pointwise, Pairwise, ListwiseSet, ListwiseRank };
enum class Judgment { Utility, Relevance };
enum class Requirement { None, COT, Reasoning, Answer };
enum class InputOrder { QuestionFirst, PassagesFirst };

std::string_view to_string(Form form);
std::string_view to_string(Judgment judgment);
std::string_view to_string(Requirement requirement);
std::string_view to_string(InputOrder order);
Form parse_form(std::string_view s);
Judgment parse_judgment(std::string_view s);
Requirement parse_requirement(std::string_view s);
InputOrder parse_input_order(std::string_view s);

struct JudgeConfig {
  Form form = Form::ListwiseSet;
  Judgment judgment = Judgment::Utility;
  Requirement requirement = Requirement::None;
  InputOrder order = InputOrder::QuestionFirst;
  int k_samples = 1;
  std::uint64_t seed = 0;
  // Moves the gold passages to this 0-based position before judging.
  std::optional<std::size_t> fixed_position;
  // One "required format only" re-prompt before recording a parse failure.
  bool reprompt_on_parse_failure = true;

  friend bool operator==(const JudgeConfig&, const JudgeConfig&) = default;
};

/// Throws ContractError for relevance with a non-listwise form, k < 1, or
/// k > 1 with a form other than ListwiseSet.
void validate(const JudgeConfig& config);

/// True for combinations that run but whose setup is not directly comparable
/// to the reference grid (currently: Pairwise with the Answer requirement).
bool is_flagged(const JudgeConfig& config);

/// Stable identifier, e.g. "utility-listwise_set", "utility-listwise_set-k10",
/// "relevance-listwise_rank-cot-pf-p3".
std::string label(const JudgeConfig& config);

// ---- prompts ----

inline constexpr std::string_view kCotPhrase = "Let's think step by step.";
inline constexpr std::string_view kReasoningPhrase =
    "Please provide a brief reasoning before giving the output.";
inline constexpr std::string_view kAnswerPhrase =
    "Please provide the answer to the question before giving the output.";
inline constexpr std::string_view kRepromptSuffix =
    "Answer with the required format only.";

/// Number of passages a form's prompt takes (N for listwise).
std::size_t passages_per_prompt(Form form, std::size_t n);

/// Renders the judgment prompt. Passages are labeled Passage-1.. in the given
/// order; line breaks inside texts are flattened to spaces. Throws
/// ContractError on a passage count that does not fit the form.
std::string render_prompt(const JudgeConfig& config, const Question& question,
                          std::span<const Passage> passages);

// ---- parsing ----

struct ParsedOutput {
  bool ok = false;
  bool verdict = false;             // Pointwise
  std::size_t winner = 0;           // Pairwise: 0 or 1
  std::vector<std::size_t> indices; // Listwise, 0-based, in output order
  std::vector<std::string> warnings;
};

/// Pointwise: yes/no from the "Judgment:" line, else the first yes/no token.
/// Pairwise: the passage named on the "Answer:" line, else the first one
/// named. ListwiseSet/Rank: identifiers on the "Passages:"/"Ranking:" line
/// (or the last line naming passages); 1-based in text, 0-based here;
/// out-of-range and repeated identifiers are dropped with a warning.
ParsedOutput parse_output(Form form, std::string_view raw, std::size_t n);

// ---- records ----

enum class ResultKind { SelectedSet, Ranking };

struct JudgmentRecord {
  std::string question_id;
  JudgeConfig config;
  // Candidate-set index shown at each prompt position (identity unless a
  // fixed position was requested).
  std::vector<std::size_t> presentation;
  std::vector<std::string> prompt_hashes;
  std::vector<std::string> raw_outputs;
  ResultKind result_kind = ResultKind::SelectedSet;
  std::vector<std::size_t> selected;  // sorted candidate indices
  std::vector<std::size_t> ranking;   // candidate indices, best first
  int call_count = 0;                 // judge calls, re-prompts excluded
  int reprompt_count = 0;
  int parse_failures = 0;
  std::vector<std::string> warnings;

  /// The result as a ranked or unranked index list.
  const std::vector<std::size_t>& result() const {
    return result_kind == ResultKind::SelectedSet ? selected : ranking;
  }
};

/// Calls the form's contract demands: N, N(N-1)/2, or k.
std::size_t expected_call_count(const JudgeConfig& config, std::size_t n);

JudgmentRecord judge_pointwise(const Question& question,
                               const CandidateSet& candidates,
                               clients::ChatClient& client,
                               const JudgeConfig& config);

JudgmentRecord judge_pairwise(const Question& question,
                              const CandidateSet& candidates,
                              clients::ChatClient& client,
                              const JudgeConfig& config);

JudgmentRecord judge_listwise(const Question& question,
                              const CandidateSet& candidates,
                              clients::ChatClient& client,
                              const JudgeConfig& config);

/// Permutation used by k-sampling iteration t (1-based): position -> index.
std::vector<std::size_t> sampling_order(std::uint64_t seed, int iteration,
                                        std::size_t n);

/// Reorders a candidate set by `order` (position -> original index).
CandidateSet reorder(const CandidateSet& candidates,
                     std::span<const std::size_t> order);

struct VoteOutcome {
  std::vector<std::size_t> selected;  // sorted
  std::size_t modal_size = 0;
  std::map<std::size_t, int> votes;
};

/// Votes per index, modal set size (ties to the smaller size), and the top
/// modal-size indices by votes (ties to the lower index). Failed iterations
/// are passed as std::nullopt and do not vote.
VoteOutcome aggregate_votes(
    const std::vector<std::optional<std::vector<std::size_t>>>& iterations);

JudgmentRecord k_sampling_judge(const Question& question,
                                const CandidateSet& candidates,
                                clients::ChatClient& client,
                                const JudgeConfig& config);

/// Applies fixed_position, dispatches on form (and k), maps results back to
/// candidate-set indices.
JudgmentRecord judge(const Question& question, const CandidateSet& candidates,
                     clients::ChatClient& client, const JudgeConfig& config);

/// Indices sorted by win count, descending; ties to the lower index.
std::vector<std::size_t> rank_by_wins(std::span<const int> wins);

}  // namespace uj::judge
