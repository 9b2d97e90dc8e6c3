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

#include "uj/synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "uj/templates.hpp"

namespace uj::synth {

using corpus::Origin;

namespace {

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || u >= 0x80;
}

bool same_surface(const std::string& a, const std::string& b) {
  return corpus::normalize_text(a) == corpus::normalize_text(b);
}

}  // namespace

// ---- entity corpus ----

bool EntityCorpus::add(EntityCategory category, const std::string& surface) {
  if (surface.empty()) throw ContractError("empty entity surface");
  if (!seen_[category].insert(surface).second) return false;
  by_category_[category].push_back(surface);
  return true;
}

const std::vector<std::string>& EntityCorpus::entities(
    EntityCategory category) const {
  static const std::vector<std::string> kEmpty;
  auto it = by_category_.find(category);
  return it == by_category_.end() ? kEmpty : it->second;
}

std::optional<EntityCategory> EntityCorpus::category_of(
    const std::string& surface) const {
  for (const auto& [category, seen] : seen_) {
    if (seen.contains(surface)) return category;
  }
  for (const auto& [category, list] : by_category_) {
    for (const auto& e : list) {
      if (same_surface(e, surface)) return category;
    }
  }
  return std::nullopt;
}

std::size_t EntityCorpus::size() const {
  std::size_t n = 0;
  for (const auto& [c, list] : by_category_) n += list.size();
  return n;
}

EntityCorpus build_entity_corpus(const std::vector<Question>& questions,
                                 clients::NerClient& ner) {
  EntityCorpus out;
  for (const Question& q : questions) {
    for (const std::string& answer : q.gold_answers) {
      if (answer.empty()) continue;
      const auto spans = ner.ner(answer);
      if (spans.empty() || spans.front().category == EntityCategory::Other) {
        ++out.skipped_other;
        continue;
      }
      // Sentence answers contribute their entity spans rather than the
      // whole sentence.
      if (corpus::normalize_text(spans.front().surface) ==
          corpus::normalize_text(answer)) {
        out.add(spans.front().category, answer);
        continue;
      }
      for (const auto& span : spans) {
        if (span.category != EntityCategory::Other) out.add(span.category, span.surface);
      }
    }
  }
  return out;
}

// ---- substitution ----

std::string_view to_string(SubstitutionMode mode) {
  return mode == SubstitutionMode::CorpusSubstitution ? "CorpusSubstitution"
                                                      : "TypeSwap";
}

std::vector<std::pair<std::size_t, std::size_t>> find_occurrences(
    std::string_view text, std::string_view needle) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (needle.empty() || needle.size() > text.size()) return out;
  const bool bound_front = is_word_char(needle.front());
  const bool bound_back = is_word_char(needle.back());
  std::size_t i = 0;
  while (i + needle.size() <= text.size()) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size(); ++k) {
      if (ascii_lower(text[i + k]) != ascii_lower(needle[k])) {
        match = false;
        break;
      }
    }
    if (match && bound_front && i > 0 && is_word_char(text[i - 1])) {
      match = false;
    }
    const std::size_t end = i + needle.size();
    if (match && bound_back && end < text.size() && is_word_char(text[end])) {
      match = false;
    }
    if (match) {
      out.emplace_back(i, needle.size());
      i = end;
    } else {
      ++i;
    }
  }
  return out;
}

std::string replace_occurrences(std::string_view text, std::string_view needle,
                                std::string_view replacement) {
  std::string out;
  std::size_t last = 0;
  for (const auto& [pos, len] : find_occurrences(text, needle)) {
    out.append(text.substr(last, pos - last));
    out.append(replacement);
    last = pos + len;
  }
  out.append(text.substr(last));
  return out;
}

std::vector<std::string> eligible_counter_answers(
    const EntityCorpus& corpus, const std::string& answer,
    EntityCategory answer_category, SubstitutionMode mode,
    std::string_view text) {
  std::vector<std::string> out;
  for (EntityCategory c : clients::kEntityCategories) {
    const bool same = c == answer_category;
    if (mode == SubstitutionMode::CorpusSubstitution && !same) continue;
    if (mode == SubstitutionMode::TypeSwap && same) continue;
    for (const std::string& e : corpus.entities(c)) {
      if (same_surface(e, answer)) continue;
      if (!find_occurrences(text, e).empty()) continue;
      out.push_back(e);
    }
  }
  return out;
}

SubstitutionResult substitute_entities(const Passage& evidence,
                                       const std::string& answer,
                                       const EntityCorpus& corpus,
                                       SubstitutionMode mode,
                                       std::uint64_t seed, int repeat_index) {
  const std::vector<std::string> answers{answer};
  const auto occurrences = find_occurrences(evidence.text, answer);
  if (!corpus::contains_answer(evidence, answers) || occurrences.empty()) {
    throw ContractError("answer '" + answer + "' does not occur in passage '" +
                        evidence.id + "'");
  }
  const EntityCategory category =
      corpus.category_of(answer).value_or(EntityCategory::Other);
  const auto eligible =
      eligible_counter_answers(corpus, answer, category, mode, evidence.text);
  if (eligible.empty()) {
    throw ExhaustionError("no eligible " + std::string(to_string(mode)) +
                          " counter-answer for '" + answer + "'");
  }
  Rng rng(seed);
  const std::string& counter = eligible[rng.uniform_index(eligible.size())];

  SubstitutionResult r;
  r.spec.mode = mode;
  r.spec.original_answer = answer;
  r.spec.counter_answer = counter;
  r.spec.original_category = category;
  r.spec.counter_category =
      corpus.category_of(counter).value_or(EntityCategory::Other);
  r.spec.repeat_index = repeat_index;

  r.passage.id = evidence.id + (mode == SubstitutionMode::CorpusSubstitution
                                    ? "#cs"
                                    : "#ts") +
                 std::to_string(repeat_index);
  r.passage.text = replace_occurrences(evidence.text, answer, counter);
  r.passage.origin = Origin::Counterfactual;
  r.passage.provenance.source_passage_id = evidence.id;
  r.passage.provenance.original_answer = answer;
  r.passage.provenance.counter_answer = counter;
  r.passage.provenance.substitution_mode = std::string(to_string(mode));
  return r;
}

namespace {

constexpr std::array<SubstitutionMode, 2> kModes = {
    SubstitutionMode::CorpusSubstitution, SubstitutionMode::TypeSwap};

std::uint64_t draw_seed(std::uint64_t seed, SubstitutionMode mode, int repeat,
                        int draw) {
  const std::uint64_t salt = (static_cast<std::uint64_t>(mode) << 32) |
                             (static_cast<std::uint64_t>(repeat) << 16) |
                             static_cast<std::uint64_t>(draw);
  return derive_seed(seed, salt);
}

void warn(std::vector<SynthWarning>* sink, const Question& q, std::string msg) {
  if (sink != nullptr) sink->push_back({q.id, std::move(msg)});
}

}  // namespace

std::vector<Passage> make_counterfactuals_substitution(
    const Question& question, const Passage& evidence,
    const EntityCorpus& corpus, std::uint64_t seed,
    std::vector<SynthWarning>* warnings) {
  const std::string* answer = nullptr;
  for (const std::string& a : question.gold_answers) {
    if (!find_occurrences(evidence.text, a).empty()) {
      answer = &a;
      break;
    }
  }
  if (answer == nullptr) {
    warn(warnings, question,
         "no gold answer occurs in evidence '" + evidence.id + "'");
    return {};
  }

  std::vector<Passage> out;
  std::size_t exhausted_modes = 0;
  for (SubstitutionMode mode : kModes) {
    std::set<std::string> used;
    bool exhausted = false;
    for (int repeat = 1; repeat <= kRepeatsPerMode && !exhausted; ++repeat) {
      bool placed = false;
      for (int draw = 0; draw < kRegenerationCap; ++draw) {
        SubstitutionResult r;
        try {
          r = substitute_entities(evidence, *answer, corpus, mode,
                                  draw_seed(seed, mode, repeat, draw), repeat);
        } catch (const ExhaustionError& e) {
          warn(warnings, question, e.what());
          exhausted = true;
          break;
        }
        if (used.insert(r.spec.counter_answer).second) {
          out.push_back(std::move(r.passage));
          placed = true;
          break;
        }
      }
      if (!placed && !exhausted) {
        warn(warnings, question,
             std::string(to_string(mode)) + " repeat " +
                 std::to_string(repeat) +
                 " dropped: no new counter-answer within the regeneration cap");
      }
    }
    if (exhausted) ++exhausted_modes;
  }
  if (exhausted_modes == kModes.size()) {
    warn(warnings, question, "both substitution categories exhausted");
  }
  return out;
}

// ---- generation ----

std::string fabrication_prompt(const std::string& claim) {
  return std::string(templates::kFabricationPrefix) + claim +
         std::string(templates::kFabricationSuffix);
}

std::string truncate_words(const std::string& text, std::size_t max_words) {
  std::istringstream ss(text);
  std::vector<std::string> words;
  for (std::string w; ss >> w;) words.push_back(w);
  if (words.size() <= max_words) return text;
  std::size_t cut = max_words;
  for (std::size_t i = max_words; i > 0; --i) {
    const char last = words[i - 1].back();
    if (last == '.' || last == '!' || last == '?') {
      cut = i;
      break;
    }
  }
  std::string out;
  for (std::size_t i = 0; i < cut; ++i) {
    if (i > 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

namespace {

class StepError : public Error {
 public:
  StepError(const std::string& step, const std::exception& cause)
      : Error(step + ": " + cause.what()) {}
};

template <typename Fn>
auto labeled(const char* step, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ContractError&) {
    throw;
  } catch (const Error& e) {
    throw StepError(step, e);
  }
}

}  // namespace

std::vector<Passage> make_counterfactuals_generated(
    const Question& question, const Passage& evidence,
    const std::string& answer, const EntityCorpus& corpus,
    GenerationClients clients, std::uint64_t seed,
    std::vector<SynthWarning>* warnings) {
  if (answer.empty()) throw ContractError("generation needs an answer text");

  // (i) counter-answers from answer entities the question does not mention.
  const auto spans = labeled("entity extraction",
                             [&] { return clients.ner.ner(answer); });
  const std::string question_norm = corpus::normalize_text(question.text);
  std::vector<clients::EntitySpan> candidates;
  for (const auto& s : spans) {
    if (s.category == EntityCategory::Other) continue;
    const std::string n = corpus::normalize_text(s.surface);
    if (n.empty() || question_norm.find(n) != std::string::npos) continue;
    candidates.push_back(s);
  }
  if (candidates.empty()) {
    warn(warnings, question, "answer has no entity absent from the question");
    return {};
  }

  struct Claim {
    std::string text;
    std::string counter_answer;
    SubstitutionMode mode;
  };
  std::vector<Claim> claims;
  for (SubstitutionMode mode : kModes) {
    std::set<std::string> used;
    for (int repeat = 1; repeat <= kRepeatsPerMode; ++repeat) {
      for (int draw = 0; draw < kRegenerationCap; ++draw) {
        Rng rng(draw_seed(seed, mode, repeat, draw));
        const auto& entity = candidates[rng.uniform_index(candidates.size())];
        const auto eligible = eligible_counter_answers(
            corpus, entity.surface, entity.category, mode, answer);
        if (eligible.empty()) continue;
        const std::string& counter =
            eligible[rng.uniform_index(eligible.size())];
        if (!used.insert(counter).second) continue;
        claims.push_back(
            {replace_occurrences(answer, entity.surface, counter), counter, mode});
        break;
      }
    }
  }

  std::vector<Passage> out;
  int index = 0;
  for (const Claim& claim : claims) {
    ++index;
    // (ii) keep claims that contradict the correct answer.
    const auto verdict = labeled("claim filter", [&] {
      return clients.nli.nli(answer, claim.text);
    });
    if (verdict.label != clients::NliLabel::Contradiction) continue;

    // (iii) fabricate supporting evidence; (iv) keep it only if it entails
    // the claim, retrying failed support checks.
    clients::ChatRequest request;
    request.user_message = fabrication_prompt(claim.text);
    request.temperature = clients::kFabricationTemperature;
    const std::string hash = clients::prompt_hash(request);
    for (int attempt = 0; attempt <= kSupportRetryCap; ++attempt) {
      const auto response = labeled("fabrication", [&] {
        return clients.llm.chat(request);
      });
      const std::string text = truncate_words(response.text, kMaxEvidenceWords);
      if (text.empty()) continue;
      const auto support = labeled("support check", [&] {
        return clients.nli.nli(text, claim.text);
      });
      if (support.label != clients::NliLabel::Entailment) continue;
      Passage p;
      p.id = evidence.id + "#gen" + std::to_string(index);
      p.text = text;
      p.origin = Origin::Counterfactual;
      p.provenance.source_passage_id = evidence.id;
      p.provenance.original_answer = answer;
      p.provenance.counter_answer = claim.counter_answer;
      p.provenance.substitution_mode = std::string(to_string(claim.mode));
      p.provenance.claim = claim.text;
      p.provenance.generation_prompt_hash = hash;
      p.provenance.support_retries = attempt;
      out.push_back(std::move(p));
      break;
    }
  }
  if (out.empty()) {
    warn(warnings, question, "no generated counterfactual survived");
  }
  return out;
}

// ---- candidate sets ----

CandidateSet build_gtu(const RetrievalRun& run, const PassageStore& store,
                       const Question& question, std::size_t n) {
  auto it = run.find(question.id);
  const std::size_t have = it == run.end() ? 0 : it->second.size();
  if (have < n) {
    throw ShortfallError("question '" + question.id + "': run has " +
                         std::to_string(have) + " entries, need " +
                         std::to_string(n));
  }
  CandidateSet set;
  set.question_id = question.id;
  for (std::size_t i = 0; i < n; ++i) {
    Passage p = store.at(it->second[i].passage_id);
    p.origin = Origin::Retrieved;
    set.passages.push_back(std::move(p));
  }
  corpus::recount(set);
  return set;
}

namespace {

bool noisy_candidate(const Question& question, const Passage& p) {
  if (question.is_ground_truth(p.id)) return false;
  if (auto it = question.is_selected.find(p.id);
      it != question.is_selected.end() && it->second != 0) {
    return false;
  }
  return !corpus::contains_answer(p, question.gold_answers);
}

}  // namespace

std::vector<Passage> select_hrnp(const RetrievalRun& run,
                                 const Question& question,
                                 const PassageStore& store, std::size_t k) {
  std::vector<Passage> out;
  auto it = run.find(question.id);
  if (it == run.end()) return out;
  for (const auto& entry : it->second) {
    if (out.size() >= k || entry.rank > static_cast<int>(corpus::kMaxRunDepth)) {
      break;
    }
    const Passage* p = store.find(entry.passage_id);
    if (p == nullptr || !noisy_candidate(question, *p)) continue;
    Passage copy = *p;
    copy.origin = Origin::HRNP;
    out.push_back(std::move(copy));
  }
  return out;
}

std::vector<Passage> select_wrnp(const RetrievalRun& run,
                                 const Question& question,
                                 const PassageStore& store,
                                 const std::set<std::string>& exclude,
                                 std::size_t k) {
  std::vector<Passage> out;
  auto it = run.find(question.id);
  if (it == run.end()) return out;
  for (auto e = it->second.rbegin(); e != it->second.rend(); ++e) {
    if (out.size() >= k) break;
    if (e->rank > static_cast<int>(corpus::kMaxRunDepth)) continue;
    if (exclude.contains(e->passage_id)) continue;
    const Passage* p = store.find(e->passage_id);
    if (p == nullptr || !noisy_candidate(question, *p)) continue;
    Passage copy = *p;
    copy.origin = Origin::WRNP;
    out.push_back(std::move(copy));
  }
  return out;
}

CandidateSet assemble_candidates(const std::string& question_id,
                                 const std::vector<Passage>& ground_truth,
                                 const std::vector<Passage>& cp_pool,
                                 const std::vector<Passage>& hrnp_pool,
                                 const std::vector<Passage>& wrnp_pool,
                                 std::uint64_t seed,
                                 const AssemblyOptions& options) {
  const std::size_t n = options.n;
  if (ground_truth.size() >= n) {
    throw ContractError("question '" + question_id +
                        "': ground truth fills the whole candidate set");
  }
  enum { kCp = 0, kHrnp = 1, kWrnp = 2 };
  const std::array<const std::vector<Passage>*, 3> pools = {&cp_pool,
                                                            &hrnp_pool,
                                                            &wrnp_pool};
  Rng rng(seed);
  const std::size_t m = n - ground_truth.size();
  const std::size_t base = m / 3;
  std::array<std::size_t, 3> quota = {base, base, base};
  for (std::size_t extra = 0; extra < m - 3 * base; ++extra) {
    ++quota[rng.uniform_index(3)];
  }

  std::array<std::size_t, 3> take{};
  for (int c = 0; c < 3; ++c) take[c] = std::min(quota[c], pools[c]->size());
  // Backfill: a short noisy pool borrows from the other noisy pool, then
  // from CP; a short CP pool borrows from HRNP, then WRNP.
  static constexpr std::array<std::array<int, 2>, 3> kBackfill = {
      {{kHrnp, kWrnp}, {kWrnp, kCp}, {kHrnp, kCp}}};
  for (int c = 0; c < 3; ++c) {
    std::size_t deficit = quota[c] > take[c] ? quota[c] - take[c] : 0;
    for (int alt : kBackfill[c]) {
      if (deficit == 0) break;
      const std::size_t spare = pools[alt]->size() - take[alt];
      const std::size_t moved = std::min(deficit, spare);
      take[alt] += moved;
      deficit -= moved;
    }
    if (deficit > 0) {
      throw AssemblyError("question '" + question_id +
                          "': candidate pools hold fewer than " +
                          std::to_string(m) + " non-gold passages");
    }
  }

  std::vector<Passage> gold = ground_truth;
  for (Passage& p : gold) p.origin = Origin::GroundTruth;
  std::vector<Passage> others;
  for (std::size_t i : rng.sample_indices(cp_pool.size(), take[kCp])) {
    others.push_back(cp_pool[i]);
    others.back().origin = Origin::Counterfactual;
  }
  for (std::size_t i = 0; i < take[kHrnp]; ++i) {
    others.push_back(hrnp_pool[i]);
    others.back().origin = Origin::HRNP;
  }
  for (std::size_t i = 0; i < take[kWrnp]; ++i) {
    others.push_back(wrnp_pool[i]);
    others.back().origin = Origin::WRNP;
  }

  CandidateSet set;
  set.question_id = question_id;
  set.seed = seed;
  if (options.ordering == Ordering::Shuffled) {
    set.passages = std::move(gold);
    set.passages.insert(set.passages.end(), others.begin(), others.end());
    rng.shuffle(set.passages);
  } else {
    rng.shuffle(others);
    const std::size_t start =
        std::min(options.ground_truth_position, others.size());
    set.passages.assign(others.begin(), others.begin() + start);
    set.passages.insert(set.passages.end(), gold.begin(), gold.end());
    set.passages.insert(set.passages.end(), others.begin() + start,
                        others.end());
  }
  corpus::recount(set);
  return set;
}

std::uint64_t question_seed(std::uint64_t global_seed,
                            const std::string& question_id) {
  return derive_seed(global_seed, question_id);
}

CandidateSet build_gti(const Question& question, const GtiInputs& inputs,
                       std::uint64_t seed, const AssemblyOptions& options,
                       std::vector<SynthWarning>* warnings) {
  if (question.ground_truth_evidence_ids.empty()) {
    throw ContractError("question '" + question.id +
                        "' has no ground-truth evidence; GTI needs it");
  }
  std::vector<Passage> gold;
  std::set<std::string> gold_ids;
  for (const std::string& id : question.ground_truth_evidence_ids) {
    const Passage* p = inputs.store.find(id);
    if (p == nullptr) {
      throw AssemblyError("question '" + question.id +
                          "': ground-truth passage '" + id +
                          "' missing from corpus");
    }
    if (!gold_ids.insert(id).second) continue;
    Passage copy = *p;
    copy.origin = Origin::GroundTruth;
    gold.push_back(std::move(copy));
  }

  std::vector<Passage> cp;
  if (question.dataset_kind == corpus::DatasetKind::FQA) {
    for (const Passage& g : gold) {
      auto part = make_counterfactuals_substitution(
          question, g, inputs.entities, derive_seed(seed, "cp/" + g.id),
          warnings);
      cp.insert(cp.end(), part.begin(), part.end());
    }
  } else {
    if (inputs.llm == nullptr || inputs.ner == nullptr ||
        inputs.nli == nullptr) {
      throw ContractError(
          "generation-based counterfactuals need LLM, NER and NLI clients");
    }
    GenerationClients gc{*inputs.llm, *inputs.ner, *inputs.nli};
    for (const std::string& answer : question.gold_answers) {
      auto part = make_counterfactuals_generated(
          question, gold.front(), answer, inputs.entities, gc,
          derive_seed(seed, "gen/" + answer), warnings);
      cp.insert(cp.end(), part.begin(), part.end());
    }
  }

  auto hrnp = select_hrnp(inputs.run, question, inputs.store);
  std::set<std::string> exclude = gold_ids;
  for (const Passage& p : hrnp) exclude.insert(p.id);
  auto wrnp = select_wrnp(inputs.run, question, inputs.store, exclude);
  CandidateSet set = assemble_candidates(question.id, gold, cp, hrnp, wrnp,
                                         derive_seed(seed, "assemble"),
                                         options);
  set.seed = seed;
  return set;
}

}  // namespace uj::synth
