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
#include <set>
#include <string>
#include <vector>

#include "uj/clients.hpp"
#include "uj/corpus.hpp"

namespace uj::synth {

using clients::EntityCategory;
using corpus::CandidateSet;
using corpus::Passage;
using corpus::PassageStore;
using corpus::Question;
using corpus::RetrievalRun;

class ShortfallError : public Error {
 public:
  using Error::Error;
};

class ExhaustionError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

// Per-category unique entity surfaces, kept in insertion order so seeded
// draws are stable.
class EntityCorpus {
 public:
  /// Returns false if the surface was already present in that category.
  bool add(EntityCategory category, const std::string& surface);
  const std::vector<std::string>& entities(EntityCategory category) const;
  /// Category holding `surface` (exact match first, then normalized match).
  std::optional<EntityCategory> category_of(const std::string& surface) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  std::size_t skipped_other = 0;

 private:
  std::map<EntityCategory, std::vector<std::string>> by_category_;
  std::map<EntityCategory, std::set<std::string>> seen_;
};

EntityCorpus build_entity_corpus(const std::vector<Question>& questions,
                                 clients::NerClient& ner);

enum class SubstitutionMode { CorpusSubstitution, TypeSwap };
std::string_view to_string(SubstitutionMode mode);

struct CounterfactualSpec {
  SubstitutionMode mode = SubstitutionMode::CorpusSubstitution;
  std::string original_answer;
  std::string counter_answer;
  EntityCategory original_category = EntityCategory::Other;
  EntityCategory counter_category = EntityCategory::Other;
  int repeat_index = 1;  // 1..5
};

/// Case-insensitive, word-bounded occurrences of `needle` in `text` as
/// (offset, length) pairs, left to right and non-overlapping.
std::vector<std::pair<std::size_t, std::size_t>> find_occurrences(
    std::string_view text, std::string_view needle);

/// Replaces every occurrence found by find_occurrences.
std::string replace_occurrences(std::string_view text, std::string_view needle,
                                std::string_view replacement);

/// Entities eligible as counter-answers: differ from the answer after
/// normalization, do not already occur in `text`, and satisfy the mode's
/// category rule. Order is the corpus order.
std::vector<std::string> eligible_counter_answers(
    const EntityCorpus& corpus, const std::string& answer,
    EntityCategory answer_category, SubstitutionMode mode,
    std::string_view text);

struct SubstitutionResult {
  Passage passage;
  CounterfactualSpec spec;
};

SubstitutionResult substitute_entities(const Passage& evidence,
                                       const std::string& answer,
                                       const EntityCorpus& corpus,
                                       SubstitutionMode mode,
                                       std::uint64_t seed,
                                       int repeat_index = 1);

inline constexpr int kRepeatsPerMode = 5;
inline constexpr int kRegenerationCap = 10;

struct SynthWarning {
  std::string question_id;
  std::string message;
};

std::vector<Passage> make_counterfactuals_substitution(
    const Question& question, const Passage& evidence,
    const EntityCorpus& corpus, std::uint64_t seed,
    std::vector<SynthWarning>* warnings = nullptr);

inline constexpr int kSupportRetryCap = 3;
inline constexpr std::size_t kMaxEvidenceWords = 100;

/// Verbatim fabrication prompt for one claim.
std::string fabrication_prompt(const std::string& claim);

/// Cuts to at most `max_words` words, ending at the last sentence boundary
/// within the limit when there is one.
std::string truncate_words(const std::string& text, std::size_t max_words);

struct GenerationClients {
  clients::ChatClient& llm;
  clients::NerClient& ner;
  clients::NliClient& nli;
};

std::vector<Passage> make_counterfactuals_generated(
    const Question& question, const Passage& evidence,
    const std::string& answer, const EntityCorpus& corpus,
    GenerationClients clients, std::uint64_t seed,
    std::vector<SynthWarning>* warnings = nullptr);

CandidateSet build_gtu(const RetrievalRun& run, const PassageStore& store,
                       const Question& question,
                       std::size_t n = corpus::kDefaultCandidateCount);

std::vector<Passage> select_hrnp(const RetrievalRun& run,
                                 const Question& question,
                                 const PassageStore& store,
                                 std::size_t k = 10);

std::vector<Passage> select_wrnp(const RetrievalRun& run,
                                 const Question& question,
                                 const PassageStore& store,
                                 const std::set<std::string>& exclude,
                                 std::size_t k = 10);

enum class Ordering { Shuffled, FixedPosition };

struct AssemblyOptions {
  std::size_t n = corpus::kDefaultCandidateCount;
  Ordering ordering = Ordering::Shuffled;
  std::size_t ground_truth_position = 0;
};

CandidateSet assemble_candidates(const std::string& question_id,
                                 const std::vector<Passage>& ground_truth,
                                 const std::vector<Passage>& cp_pool,
                                 const std::vector<Passage>& hrnp_pool,
                                 const std::vector<Passage>& wrnp_pool,
                                 std::uint64_t seed,
                                 const AssemblyOptions& options = {});

struct GtiInputs {
  const RetrievalRun& run;
  const PassageStore& store;
  const EntityCorpus& entities;
  // Needed only for NFQA questions (generation-based counterfactuals).
  clients::ChatClient* llm = nullptr;
  clients::NerClient* ner = nullptr;
  clients::NliClient* nli = nullptr;
};

/// Full GTI construction for one question: gold passages, counterfactual
/// pool, HRNP, WRNP, assembly. All randomness comes from `seed`.
CandidateSet build_gti(const Question& question, const GtiInputs& inputs,
                       std::uint64_t seed, const AssemblyOptions& options = {},
                       std::vector<SynthWarning>* warnings = nullptr);

/// Seed of the per-question generator.
std::uint64_t question_seed(std::uint64_t global_seed,
                            const std::string& question_id);

}  // namespace uj::synth
