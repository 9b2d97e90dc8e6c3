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

#include "uj/qa.hpp"

#include <algorithm>
#include <set>

#include "uj/templates.hpp"

namespace uj::qa {

namespace t = uj::templates;

std::string_view to_string(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::None: return "none";
    case EvidenceKind::Dense: return "dense";
    case EvidenceKind::GroundTruth: return "ground_truth";
    case EvidenceKind::RelevanceJudged: return "relevance_judged";
    case EvidenceKind::UtilityJudged: return "utility_judged";
  }
  return "?";
}

EvidenceKind parse_evidence_kind(std::string_view s) {
  for (auto k : {EvidenceKind::None, EvidenceKind::Dense, EvidenceKind::GroundTruth,
                 EvidenceKind::RelevanceJudged, EvidenceKind::UtilityJudged}) {
    if (s == to_string(k)) return k;
  }
  throw ContractError("unknown evidence kind: " + std::string(s));
}

void EvidenceSource::validate() const {
  const bool judged = kind == EvidenceKind::RelevanceJudged ||
                      kind == EvidenceKind::UtilityJudged;
  if (judged != judge_config.has_value()) {
    throw ContractError(std::string("evidence source ") +
                        std::string(to_string(kind)) +
                        (judged ? " needs" : " takes no") + " judge config");
  }
  if (judged) {
    judge::validate(*judge_config);
    const auto want = kind == EvidenceKind::UtilityJudged ? judge::Judgment::Utility
                                                          : judge::Judgment::Relevance;
    if (judge_config->judgment != want) {
      throw ContractError("evidence source kind disagrees with its judgment");
    }
  }
}

std::string EvidenceSource::label() const {
  if (judge_config) return judge::label(*judge_config);
  return std::string(to_string(kind));
}

EvidenceSource judged_source(const judge::JudgeConfig& config) {
  EvidenceSource s;
  s.kind = config.judgment == judge::Judgment::Utility ? EvidenceKind::UtilityJudged
                                                       : EvidenceKind::RelevanceJudged;
  s.judge_config = config;
  return s;
}

std::string render_qa_prompt(DatasetKind kind, const Question& question,
                             std::span<const Passage> evidence) {
  std::string out;
  if (!evidence.empty()) {
    out += t::kQaEvidenceIntro;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
      std::string text = evidence[i].text;
      std::replace(text.begin(), text.end(), '\n', ' ');
      std::replace(text.begin(), text.end(), '\r', ' ');
      out += "\n" + std::string(t::kPassagePrefix) + std::to_string(i + 1) + ": " + text;
    }
    out += "\n\n";
    out += kind == DatasetKind::FQA ? t::kQaFactoidWithEvidence
                                    : t::kQaNonFactoidWithEvidence;
  } else {
    out += kind == DatasetKind::FQA ? t::kQaFactoidNoEvidence
                                    : t::kQaNonFactoidNoEvidence;
  }
  std::string q = question.text;
  std::replace(q.begin(), q.end(), '\n', ' ');
  out += "\n\n" + std::string(t::kQuestionLabel) + q + "\n" +
         std::string(t::kQaAnswerCue);
  return out;
}

void JudgmentStore::add(judge::JudgmentRecord record) {
  auto key = std::make_pair(judge::label(record.config), record.question_id);
  records_.insert_or_assign(std::move(key), std::move(record));
}

const judge::JudgmentRecord* JudgmentStore::find(const judge::JudgeConfig& config,
                                                 std::string_view question_id) const {
  auto it = records_.find({judge::label(config), std::string(question_id)});
  return it == records_.end() ? nullptr : &it->second;
}

judge::JudgeConfig paired_set_config(const judge::JudgeConfig& rank_config) {
  judge::JudgeConfig c = rank_config;
  c.form = judge::Form::ListwiseSet;
  c.k_samples = 1;
  return c;
}

namespace {

const judge::JudgmentRecord& require(const JudgmentStore& store,
                                     const judge::JudgeConfig& config,
                                     const std::string& qid) {
  const auto* rec = store.find(config, qid);
  if (rec == nullptr) {
    throw LookupError("no judgment '" + judge::label(config) + "' for question '" +
                      qid + "'");
  }
  return *rec;
}

}  // namespace

std::vector<Passage> select_evidence(const EvidenceSource& source,
                                     const Question& question,
                                     const CandidateSet& candidates,
                                     const JudgmentStore& judgments,
                                     const corpus::PassageStore* store) {
  source.validate();
  std::vector<Passage> out;
  switch (source.kind) {
    case EvidenceKind::None: return out;
    case EvidenceKind::Dense: return candidates.passages;
    case EvidenceKind::GroundTruth: {
      std::set<std::string> have;
      for (std::size_t i : candidates.ground_truth_indices(question)) {
        out.push_back(candidates.passages[i]);
        have.insert(candidates.passages[i].id);
      }
      for (const auto& id : question.ground_truth_evidence_ids) {
        if (have.count(id) != 0) continue;
        const Passage* p = store ? store->find(id) : nullptr;
        if (p == nullptr) {
          throw LookupError("gold passage '" + id + "' of question '" +
                            question.id + "' is neither in the candidate set "
                            "nor in the passage store");
        }
        out.push_back(*p);
        have.insert(id);
      }
      return out;
    }
    case EvidenceKind::RelevanceJudged:
    case EvidenceKind::UtilityJudged: break;
  }

  const judge::JudgeConfig& config = *source.judge_config;
  const auto& rec = require(judgments, config, question.id);
  auto index_ok = [&](std::size_t i) {
    if (i >= candidates.size()) {
      throw ContractError("judgment index " + std::to_string(i) +
                          " outside the candidate set of '" + question.id + "'");
    }
  };
  if (rec.result_kind == judge::ResultKind::SelectedSet) {
    for (std::size_t i : rec.selected) {
      index_ok(i);
      out.push_back(candidates.passages[i]);
    }
    return out;
  }
  const judge::JudgmentRecord* paired =
      judgments.find(paired_set_config(config), question.id);
  if (paired == nullptr) {
    judge::JudgeConfig fallback;
    fallback.judgment = config.judgment;
    fallback.seed = config.seed;
    paired = judgments.find(fallback, question.id);
  }
  if (paired == nullptr) {
    throw LookupError("no paired listwise-set judgment for '" + judge::label(config) +
                      "' on question '" + question.id + "'");
  }
  const std::size_t s = std::min(paired->selected.size(), rec.ranking.size());
  for (std::size_t r = 0; r < s; ++r) {
    index_ok(rec.ranking[r]);
    out.push_back(candidates.passages[rec.ranking[r]]);
  }
  return out;
}

AnswerRecord generate_answer(const Question& question,
                             const std::vector<Passage>& evidence,
                             const EvidenceSource& source,
                             clients::ChatClient& client) {
  AnswerRecord rec;
  rec.question_id = question.id;
  rec.source = source;
  rec.scored_as = question.dataset_kind;
  for (const auto& p : evidence) rec.evidence_ids.push_back(p.id);
  clients::ChatRequest request;
  request.user_message = render_qa_prompt(question.dataset_kind, question, evidence);
  request.temperature = 0.0;
  rec.prompt_hash = clients::prompt_hash(request);
  rec.answer_text = client.chat(request).text;
  return rec;
}

metrics::AnswerScore score_answer(DatasetKind kind, std::string_view answer,
                                  std::span<const std::string> golds) {
  if (golds.empty()) throw ContractError("score_answer: no gold answers");
  metrics::AnswerScore s;
  if (kind == DatasetKind::FQA) {
    s.em = metrics::exact_match(answer, golds);
    s.token_f1 = metrics::token_f1(answer, golds);
  } else {
    for (const auto& g : golds) s.rouge_l = std::max(s.rouge_l, metrics::rouge_l(answer, g));
    s.bleu = metrics::bleu(answer, golds, 4);
  }
  return s;
}

std::vector<std::string> metric_names(DatasetKind kind) {
  if (kind == DatasetKind::FQA) return {"EM", "F1"};
  return {"ROUGE-L", "BLEU-1", "BLEU-2", "BLEU-3", "BLEU-4"};
}

namespace {

std::map<std::string, double> metric_values(DatasetKind kind,
                                            const metrics::AnswerScore& s) {
  if (kind == DatasetKind::FQA) return {{"EM", s.em}, {"F1", s.token_f1}};
  std::map<std::string, double> out{{"ROUGE-L", s.rouge_l}};
  for (int n = 1; n <= 4; ++n) {
    auto it = s.bleu.find(n);
    out["BLEU-" + std::to_string(n)] = it == s.bleu.end() ? 0.0 : it->second;
  }
  return out;
}

}  // namespace

EvalReport evaluate_answers(std::vector<AnswerRecord>& records,
                            const std::vector<Question>& questions) {
  std::map<std::string, const Question*> by_id;
  for (const auto& q : questions) by_id[q.id] = &q;
  EvalReport report;
  report.record_count = records.size();
  std::map<std::string, std::map<DatasetKind, std::map<std::string, double>>> sums;
  for (auto& rec : records) {
    auto it = by_id.find(rec.question_id);
    if (it == by_id.end()) {
      throw LookupError("answer record for unknown question '" + rec.question_id + "'");
    }
    const Question& q = *it->second;
    if (rec.scored_as != q.dataset_kind) {
      throw ContractError("answer for '" + q.id + "' scored as " +
                          std::string(corpus::to_string(rec.scored_as)) +
                          " but the question is " +
                          std::string(corpus::to_string(q.dataset_kind)));
    }
    if (!rec.scores) rec.scores = score_answer(q.dataset_kind, rec.answer_text, q.gold_answers);
    const std::string label = rec.source.label();
    if (report.rows.count(label) == 0) report.source_order.push_back(label);
    KindSection& section = report.rows[label][q.dataset_kind];
    ++section.count;
    for (const auto& [name, v] : metric_values(q.dataset_kind, *rec.scores)) {
      sums[label][q.dataset_kind][name] += v;
    }
  }
  for (auto& [label, kinds] : report.rows) {
    for (auto& [kind, section] : kinds) {
      for (const auto& [name, total] : sums[label][kind]) {
        section.means[name] = 100.0 * total / static_cast<double>(section.count);
      }
    }
  }
  return report;
}

}  // namespace uj::qa
