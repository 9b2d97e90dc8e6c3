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

#include <string_view>

// Fixed wording shared by the prompt renderers and the prompt inspector.
// Changing any of these changes prompt hashes and the pinned snapshots.
namespace uj::templates {

inline constexpr std::string_view kQuestionLabel = "Question: ";
inline constexpr std::string_view kPassagePrefix = "Passage-";

inline constexpr std::string_view kPointwiseUtilityTask =
    "Judge whether the passage above has utility in answering the question, "
    "that is, whether it provides the information needed to answer the "
    "question correctly.";
inline constexpr std::string_view kPairwiseUtilityTask =
    "Judge which of the two passages above has more utility in answering the "
    "question, that is, which one better provides the information needed to "
    "answer the question correctly.";
inline constexpr std::string_view kSetUtilityTask =
    "Select all passages above that have utility in answering the question, "
    "that is, the passages that provide the information needed to answer the "
    "question correctly.";
inline constexpr std::string_view kSetRelevanceTask =
    "Select all passages above that are relevant to the question.";
// Rank tasks are "<prefix><N><suffix>".
inline constexpr std::string_view kRankTaskPrefix = "Rank all ";
inline constexpr std::string_view kRankUtilitySuffix =
    " passages above by their utility in answering the question, from the "
    "most useful to the least useful.";
inline constexpr std::string_view kRankRelevanceSuffix =
    " passages above by their relevance to the question, from the most "
    "relevant to the least relevant.";

inline constexpr std::string_view kNoRequirement = "Output only the last line.";
inline constexpr std::string_view kCotRequirement =
    "Let's think step by step. Write down your thinking before the last line.";
inline constexpr std::string_view kReasoningRequirement =
    "Please provide a brief reasoning before giving the output.";
inline constexpr std::string_view kAnswerRequirement =
    "Please provide the answer to the question before giving the output.";

inline constexpr std::string_view kPointwiseOutput =
    "Give your final judgment on the last line as \"Judgment: Yes\" or "
    "\"Judgment: No\".";
inline constexpr std::string_view kPairwiseOutput =
    "Give your final choice on the last line as \"Answer: Passage-1\" or "
    "\"Answer: Passage-2\".";
inline constexpr std::string_view kSetOutput =
    "Give the selected passages on the last line as \"Passages: \" followed by "
    "their identifiers separated by commas, for example \"Passages: "
    "Passage-2, Passage-5\"; write \"Passages: none\" if no passage "
    "qualifies.";
inline constexpr std::string_view kRankOutput =
    "Give the ranking on the last line as \"Ranking: \" followed by all "
    "passage identifiers from best to worst separated by \" > \", for "
    "example \"Ranking: Passage-3 > Passage-1 > Passage-2\".";

inline constexpr std::string_view kPointwiseAnswerLine = "Judgment:";
inline constexpr std::string_view kPairwiseAnswerLine = "Answer:";
inline constexpr std::string_view kSetAnswerLine = "Passages:";
inline constexpr std::string_view kRankAnswerLine = "Ranking:";

// QA prompts.
inline constexpr std::string_view kQaEvidenceIntro =
    "Given the following passages:";
inline constexpr std::string_view kQaFactoidWithEvidence =
    "Answer the question based on the given passages with one or a few "
    "words. Only give me the answer and do not output any other words.";
inline constexpr std::string_view kQaFactoidNoEvidence =
    "Answer the question with one or a few words. Only give me the answer and "
    "do not output any other words.";
inline constexpr std::string_view kQaNonFactoidWithEvidence =
    "Answer the question based on the given passages in one or two complete "
    "sentences. Only give me the answer and do not output any other words.";
inline constexpr std::string_view kQaNonFactoidNoEvidence =
    "Answer the question in one or two complete sentences. Only give me the "
    "answer and do not output any other words.";
inline constexpr std::string_view kQaAnswerCue = "Answer:";

// Counterfactual evidence fabrication.
inline constexpr std::string_view kFabricationPrefix =
    "Given a claim, please write a short piece of evidence to support it. The "
    "maximum length of the generated evidence is 100 words. You can fabricate "
    "content, but it should be as realistic as possible. Claim: ";
inline constexpr std::string_view kFabricationSuffix = " Evidence:";

}  // namespace uj::templates
