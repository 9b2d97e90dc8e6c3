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

#include "uj/mock_llm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "uj/templates.hpp"

namespace uj::mock {

namespace t = uj::templates;
using judge::Form;
using judge::Judgment;
using judge::Requirement;

namespace {

std::vector<std::string_view> lines_of(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

// "Passage-12: text" -> text.
std::optional<std::string_view> passage_body(std::string_view line) {
  if (!line.starts_with(t::kPassagePrefix)) return std::nullopt;
  std::size_t i = t::kPassagePrefix.size();
  const std::size_t digits = i;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == digits || line.substr(i, 2) != ": ") return std::nullopt;
  return line.substr(i + 2);
}

}  // namespace

PromptAnatomy inspect_prompt(std::string_view prompt) {
  PromptAnatomy a;
  const std::string suffix = "\n\n" + std::string(judge::kRepromptSuffix);
  if (prompt.ends_with(suffix)) {
    a.reprompt = true;
    prompt.remove_suffix(suffix.size());
  }
  if (prompt.starts_with(t::kFabricationPrefix) &&
      prompt.ends_with(t::kFabricationSuffix)) {
    a.kind = PromptKind::Fabrication;
    a.claim = std::string(prompt.substr(
        t::kFabricationPrefix.size(),
        prompt.size() - t::kFabricationPrefix.size() - t::kFabricationSuffix.size()));
    return a;
  }

  bool task_found = false;
  for (std::string_view line : lines_of(prompt)) {
    if (auto body = passage_body(line)) {
      a.passages.emplace_back(*body);
    } else if (line.starts_with(t::kQuestionLabel)) {
      a.question = std::string(line.substr(t::kQuestionLabel.size()));
    } else if (line == t::kQaFactoidWithEvidence || line == t::kQaFactoidNoEvidence) {
      a.kind = PromptKind::QaFactoid;
    } else if (line == t::kQaNonFactoidWithEvidence ||
               line == t::kQaNonFactoidNoEvidence) {
      a.kind = PromptKind::QaNonFactoid;
    } else if (line == t::kPointwiseUtilityTask) {
      a.form = Form::Pointwise;
      task_found = true;
    } else if (line == t::kPairwiseUtilityTask) {
      a.form = Form::Pairwise;
      task_found = true;
    } else if (line == t::kSetUtilityTask || line == t::kSetRelevanceTask) {
      a.form = Form::ListwiseSet;
      a.judgment = line == t::kSetUtilityTask ? Judgment::Utility
                                              : Judgment::Relevance;
      task_found = true;
    } else if (line.starts_with(t::kRankTaskPrefix) &&
               (line.ends_with(t::kRankUtilitySuffix) ||
                line.ends_with(t::kRankRelevanceSuffix))) {
      a.form = Form::ListwiseRank;
      a.judgment = line.ends_with(t::kRankUtilitySuffix) ? Judgment::Utility
                                                         : Judgment::Relevance;
      task_found = true;
    } else if (line == t::kCotRequirement) {
      a.requirement = Requirement::COT;
    } else if (line == t::kReasoningRequirement) {
      a.requirement = Requirement::Reasoning;
    } else if (line == t::kAnswerRequirement) {
      a.requirement = Requirement::Answer;
    }
  }
  if (task_found && a.kind == PromptKind::Unknown) a.kind = PromptKind::Judge;
  return a;
}

// ---- knowledge ----

void OracleKnowledge::add_question(const Question& question) {
  Entry& e = by_question_[corpus::normalize_text(question.text)];
  if (e.golds.empty()) e.golds = question.gold_answers;
}

void OracleKnowledge::add_passage(const Question& question, const Passage& passage,
                                  Label label, bool replace) {
  add_question(question);
  Entry& e = by_question_[corpus::normalize_text(question.text)];
  auto [it, inserted] = e.passages.emplace(corpus::normalize_text(passage.text), label);
  if (!inserted && (replace || static_cast<int>(label) > static_cast<int>(it->second))) {
    it->second = label;
  }
}

void OracleKnowledge::add_candidates(const Question& question,
                                     const CandidateSet& set) {
  for (const Passage& p : set.passages) {
    Label label = Label::Topical;
    if (p.origin == corpus::Origin::GroundTruth || question.is_ground_truth(p.id)) {
      label = Label::Useful;
    } else if (p.origin == corpus::Origin::WRNP) {
      label = Label::Unrelated;
    }
    add_passage(question, p, label, true);
  }
}

void OracleKnowledge::add_question_context(const Question& question,
                                           const corpus::PassageStore& store,
                                           const corpus::RetrievalRun* run) {
  add_question(question);
  for (const auto& id : question.ground_truth_evidence_ids) {
    if (const Passage* p = store.find(id)) add_passage(question, *p, Label::Useful);
  }
  if (run == nullptr) return;
  auto it = run->find(question.id);
  if (it == run->end()) return;
  for (const auto& entry : it->second) {
    if (const Passage* p = store.find(entry.passage_id)) {
      add_passage(question, *p,
                  question.is_ground_truth(p->id) ? Label::Useful : Label::Topical);
    }
  }
}

Label OracleKnowledge::label(std::string_view question_text,
                             std::string_view passage_text) const {
  auto q = by_question_.find(corpus::normalize_text(question_text));
  if (q == by_question_.end()) return Label::Unrelated;
  auto p = q->second.passages.find(corpus::normalize_text(passage_text));
  return p == q->second.passages.end() ? Label::Unrelated : p->second;
}

const std::vector<std::string>* OracleKnowledge::gold_answers(
    std::string_view question_text) const {
  auto q = by_question_.find(corpus::normalize_text(question_text));
  return q == by_question_.end() ? nullptr : &q->second.golds;
}

double NoiseModel::miss(std::size_t position) const {
  return std::clamp(miss_base + miss_slope * static_cast<double>(position), 0.0, 0.95);
}

// ---- responses ----

namespace {

std::string tag(std::size_t index) {
  return std::string(t::kPassagePrefix) + std::to_string(index + 1);
}

std::string preamble(const PromptAnatomy& a, const OracleKnowledge& k) {
  if (a.reprompt) return {};
  switch (a.requirement) {
    case Requirement::None: return {};
    case Requirement::COT:
      return "Let me go through the passages one at a time and check what each "
             "says about the question.\n";
    case Requirement::Reasoning:
      return "Reasoning: only passages stating the needed facts count.\n";
    case Requirement::Answer: {
      const auto* golds = k.gold_answers(a.question);
      return "Answer to the question: " +
             (golds && !golds->empty() ? golds->front() : std::string("unknown")) +
             "\n";
    }
  }
  return {};
}

bool counts(Label label, Judgment judgment) {
  return judgment == Judgment::Utility ? label == Label::Useful
                                       : label != Label::Unrelated;
}

std::string render_set(const std::vector<std::size_t>& chosen) {
  std::string out(t::kSetAnswerLine);
  if (chosen.empty()) return out + " none";
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    out += (i == 0 ? " " : ", ") + tag(chosen[i]);
  }
  return out;
}

std::string render_ranking(const std::vector<std::size_t>& order) {
  std::string out(t::kRankAnswerLine);
  for (std::size_t i = 0; i < order.size(); ++i) {
    out += (i == 0 ? " " : " > ") + tag(order[i]);
  }
  return out;
}

std::string qa_response(const OracleKnowledge& k, const PromptAnatomy& a) {
  const auto* golds = k.gold_answers(a.question);
  if (golds == nullptr || golds->empty()) return "unknown";
  for (const auto& p : a.passages) {
    if (k.label(a.question, p) == Label::Useful) return golds->front();
  }
  return "unknown";
}

// `keep[i]` says whether passage i is judged positive; scores order ranks.
std::string judge_response(const PromptAnatomy& a, const OracleKnowledge& k,
                           const std::vector<bool>& keep,
                           const std::vector<int>& score) {
  std::string out = preamble(a, k);
  switch (a.form) {
    case Form::Pointwise:
      return out + std::string(t::kPointwiseAnswerLine) + (keep[0] ? " Yes" : " No");
    case Form::Pairwise: {
      const std::size_t w = score[1] > score[0] ? 1 : 0;
      return out + std::string(t::kPairwiseAnswerLine) + " " + tag(w);
    }
    case Form::ListwiseSet: {
      std::vector<std::size_t> chosen;
      for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i]) chosen.push_back(i);
      }
      return out + render_set(chosen);
    }
    case Form::ListwiseRank: {
      std::vector<std::size_t> order(score.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });
      return out + render_ranking(order);
    }
  }
  return out;
}

}  // namespace

std::string oracle_response(const OracleKnowledge& knowledge,
                            std::string_view prompt) {
  const PromptAnatomy a = inspect_prompt(prompt);
  switch (a.kind) {
    case PromptKind::Fabrication: return "Reports confirm that " + a.claim;
    case PromptKind::QaFactoid:
    case PromptKind::QaNonFactoid: return qa_response(knowledge, a);
    case PromptKind::Unknown: return "unknown";
    case PromptKind::Judge: break;
  }
  std::vector<bool> keep;
  std::vector<int> score;
  for (const auto& p : a.passages) {
    const Label l = knowledge.label(a.question, p);
    keep.push_back(counts(l, a.judgment));
    score.push_back(a.judgment == Judgment::Utility ? (l == Label::Useful ? 1 : 0)
                                                    : static_cast<int>(l));
  }
  return judge_response(a, knowledge, keep, score);
}

std::string noisy_oracle_response(const OracleKnowledge& knowledge,
                                  const NoiseModel& noise,
                                  std::string_view prompt) {
  const PromptAnatomy a = inspect_prompt(prompt);
  if (a.kind != PromptKind::Judge) return oracle_response(knowledge, prompt);
  Rng rng(derive_seed(noise.seed, clients::prompt_hash(prompt)));
  std::vector<bool> keep;
  std::vector<int> score;
  for (std::size_t i = 0; i < a.passages.size(); ++i) {
    const bool truth = counts(knowledge.label(a.question, a.passages[i]), a.judgment);
    const bool k = truth ? !rng.bernoulli(noise.miss(i))
                         : rng.bernoulli(noise.false_positive);
    keep.push_back(k);
    score.push_back(k ? 1 : 0);
  }
  return judge_response(a, knowledge, keep, score);
}

std::unique_ptr<clients::FunctionChatClient> make_oracle_client(
    std::shared_ptr<const OracleKnowledge> knowledge, int parallelism) {
  return std::make_unique<clients::FunctionChatClient>(
      "mock:oracle",
      [knowledge](const clients::ChatRequest& r) {
        return oracle_response(*knowledge, r.user_message);
      },
      parallelism);
}

std::unique_ptr<clients::FunctionChatClient> make_noisy_client(
    std::shared_ptr<const OracleKnowledge> knowledge, NoiseModel noise,
    int parallelism) {
  return std::make_unique<clients::FunctionChatClient>(
      "mock:noisy",
      [knowledge, noise](const clients::ChatRequest& r) {
        return noisy_oracle_response(*knowledge, noise, r.user_message);
      },
      parallelism);
}

}  // namespace uj::mock
