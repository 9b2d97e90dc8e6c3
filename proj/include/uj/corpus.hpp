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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "uj/common.hpp"

namespace uj::corpus {

enum class DatasetKind { FQA, NFQA };

enum class Origin { GroundTruth, Counterfactual, HRNP, WRNP, Retrieved };

std::string_view to_string(DatasetKind kind);
std::string_view to_string(Origin origin);
DatasetKind parse_dataset_kind(std::string_view s);
Origin parse_origin(std::string_view s);

struct Question {
  std::string id;
  std::string text;
  std::vector<std::string> gold_answers;
  std::vector<std::string> ground_truth_evidence_ids;
  DatasetKind dataset_kind = DatasetKind::FQA;
  // Optional per-passage annotation (MSMARCO is_selected). Absent passages
  // are unlabeled.
  std::map<std::string, int> is_selected;

  bool is_ground_truth(std::string_view passage_id) const;
};

// Where a synthesized passage came from. Fields that do not apply stay empty.
struct Provenance {
  std::string source_passage_id;
  std::string original_answer;
  std::string counter_answer;
  std::string substitution_mode;
  std::string claim;
  std::string generation_prompt_hash;
  int support_retries = 0;

  bool empty() const;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Passage {
  std::string id;
  std::string text;
  Origin origin = Origin::Retrieved;
  Provenance provenance;

  friend bool operator==(const Passage&, const Passage&) = default;
};

/// Throws ContractError when a passage breaks its invariants (empty text,
/// counterfactual without a recorded counter-answer).
void validate(const Passage& passage);

struct RunEntry {
  std::string passage_id;
  int rank = 0;
  double score = 0.0;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

// question id -> entries sorted by rank, ranks 1..depth without gaps.
using RetrievalRun = std::map<std::string, std::vector<RunEntry>>;

inline constexpr std::size_t kMaxRunDepth = 100;
inline constexpr std::size_t kDefaultCandidateCount = 10;

struct CandidateSet {
  std::string question_id;
  std::vector<Passage> passages;
  std::uint64_t seed = 0;
  std::map<Origin, std::size_t> composition;

  std::size_t size() const { return passages.size(); }
  /// Indices of passages that are gold evidence for `question`: origin
  /// GroundTruth, or a retrieved passage whose id is a gold id.
  std::vector<std::size_t> ground_truth_indices(const Question& question) const;
};

/// Recomputes `composition` from the passages' origins.
void recount(CandidateSet& set);

/// Moves the gold passages into a contiguous block starting at `position`
/// (clamped so the block fits), keeping the relative order of the others.
CandidateSet place_ground_truth(const CandidateSet& set,
                                const Question& question,
                                std::size_t position);

class PassageStore {
 public:
  void add(Passage passage);
  const Passage* find(std::string_view id) const;
  const Passage& at(std::string_view id) const;
  std::size_t size() const { return by_id_.size(); }

 private:
  std::unordered_map<std::string, Passage> by_id_;
};

// ---- ingestion ----

std::vector<Question> load_questions(const std::filesystem::path& path,
                                     DatasetKind kind);
std::vector<Question> parse_questions(std::string_view text, DatasetKind kind);

PassageStore load_passages(const std::filesystem::path& path);
PassageStore parse_passages(std::string_view text);

RetrievalRun load_run(const std::filesystem::path& path);
RetrievalRun parse_run(std::string_view text);
/// Six-field TREC layout, questions in key order, entries by rank.
std::string serialize_run(const RetrievalRun& run, std::string_view tag = "run");

// ---- text ----

/// Lowercase, drop ASCII punctuation, drop the articles a/an/the as whole
/// tokens, collapse whitespace. Non-ASCII bytes pass through unchanged.
std::string normalize_text(std::string_view s);

/// Whitespace tokens of normalize_text(s).
std::vector<std::string> normalized_tokens(std::string_view s);

bool contains_answer(std::string_view passage_text,
                     std::span<const std::string> answers);
bool contains_answer(const Passage& passage,
                     std::span<const std::string> answers);

std::string read_file(const std::filesystem::path& path);

}  // namespace uj::corpus
