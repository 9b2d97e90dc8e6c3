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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uj/clients.hpp"
#include "uj/corpus.hpp"
#include "uj/judge.hpp"

// Offline stand-ins for the judge/answer LLM. They recover the question and
// passages from the rendered prompt and answer from labels registered out of
// band, so no prompt has to be scripted by hand.
namespace uj::mock {

using corpus::CandidateSet;
using corpus::Passage;
using corpus::Question;

enum class PromptKind { Unknown, Judge, QaFactoid, QaNonFactoid, Fabrication };

struct PromptAnatomy {
  PromptKind kind = PromptKind::Unknown;
  judge::Form form = judge::Form::ListwiseSet;
  judge::Judgment judgment = judge::Judgment::Utility;
  judge::Requirement requirement = judge::Requirement::None;
  bool reprompt = false;
  std::string question;
  std::vector<std::string> passages;  // in prompt order
  std::string claim;                  // fabrication prompts
};

/// Recognizes the prompts rendered by judge::render_prompt,
/// qa::render_qa_prompt and synth::fabrication_prompt.
PromptAnatomy inspect_prompt(std::string_view prompt);

enum class Label { Unrelated = 0, Topical = 1, Useful = 2 };

// Per-question passage labels keyed by normalized texts, since that is all a
// prompt carries.
class OracleKnowledge {
 public:
  void add_question(const Question& question);
  /// GroundTruth origin or a gold id -> Useful; Counterfactual, HRNP and
  /// other retrieved passages -> Topical; WRNP -> Unrelated. These labels
  /// replace earlier ones for the same text.
  void add_candidates(const Question& question, const CandidateSet& set);
  /// Keeps the higher of an existing and the new label unless `replace`.
  void add_passage(const Question& question, const Passage& passage, Label label,
                   bool replace = false);
  /// Gold passages from the store and the run's passages (gold ids Useful,
  /// the rest Topical).
  void add_question_context(const Question& question,
                            const corpus::PassageStore& store,
                            const corpus::RetrievalRun* run);

  Label label(std::string_view question_text, std::string_view passage_text) const;
  const std::vector<std::string>* gold_answers(std::string_view question_text) const;

 private:
  struct Entry {
    std::vector<std::string> golds;
    std::map<std::string, Label> passages;
  };
  std::map<std::string, Entry> by_question_;
};

struct NoiseModel {
  std::uint64_t seed = 0;
  // Chance of leaving out a useful passage shown at 0-based position p:
  // miss_base + miss_slope * p, capped at 0.95.
  double miss_base = 0.10;
  double miss_slope = 0.06;
  // Chance of including a passage that is not useful.
  double false_positive = 0.08;

  double miss(std::size_t position) const;
};

/// Perfect judge and answerer. Judge prompts are answered from the labels
/// (utility: Useful; relevance: Useful or Topical); QA prompts echo the first
/// gold answer when a Useful passage is present and "unknown" otherwise;
/// fabrication prompts restate the claim.
std::string oracle_response(const OracleKnowledge& knowledge,
                            std::string_view prompt);

/// Oracle with seeded, position-dependent judging errors. The draw is keyed
/// by the prompt, so identical prompts get identical answers.
std::string noisy_oracle_response(const OracleKnowledge& knowledge,
                                  const NoiseModel& noise,
                                  std::string_view prompt);

std::unique_ptr<clients::FunctionChatClient> make_oracle_client(
    std::shared_ptr<const OracleKnowledge> knowledge, int parallelism = 4);

std::unique_ptr<clients::FunctionChatClient> make_noisy_client(
    std::shared_ptr<const OracleKnowledge> knowledge, NoiseModel noise,
    int parallelism = 4);

}  // namespace uj::mock
