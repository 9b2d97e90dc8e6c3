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

#include "uj/records.hpp"

#include <fstream>
#include <sstream>

namespace uj::records {

namespace {

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw ContractError(std::string("record lacks \"") + name + "\"");
  return j.at(name).get<T>();
}

json index_array(const std::vector<std::size_t>& v) {
  json a = json::array();
  for (std::size_t x : v) a.push_back(x);
  return a;
}

}  // namespace

json encode(const Meta& meta) {
  return json{{"meta",
               {{"seed", meta.seed},
                {"config_hash", meta.config_hash},
                {"tool_version", meta.tool_version}}}};
}

Meta decode_meta(const json& j) {
  const json& m = j.at("meta");
  Meta out;
  out.seed = field<std::uint64_t>(m, "seed");
  out.config_hash = field<std::string>(m, "config_hash");
  out.tool_version = field<std::string>(m, "tool_version");
  return out;
}

json encode(const corpus::Passage& p) {
  json j{{"id", p.id}, {"text", p.text}, {"origin", corpus::to_string(p.origin)}};
  if (!p.provenance.empty()) {
    const auto& v = p.provenance;
    json prov = json::object();
    if (!v.source_passage_id.empty()) prov["source_passage_id"] = v.source_passage_id;
    if (!v.original_answer.empty()) prov["original_answer"] = v.original_answer;
    if (!v.counter_answer.empty()) prov["counter_answer"] = v.counter_answer;
    if (!v.substitution_mode.empty()) prov["substitution_mode"] = v.substitution_mode;
    if (!v.claim.empty()) prov["claim"] = v.claim;
    if (!v.generation_prompt_hash.empty()) {
      prov["generation_prompt_hash"] = v.generation_prompt_hash;
    }
    if (v.support_retries != 0) prov["support_retries"] = v.support_retries;
    j["provenance"] = prov;
  }
  return j;
}

corpus::Passage decode_passage(const json& j) {
  corpus::Passage p;
  p.id = field<std::string>(j, "id");
  p.text = field<std::string>(j, "text");
  p.origin = corpus::parse_origin(field<std::string>(j, "origin"));
  if (j.contains("provenance")) {
    const json& v = j.at("provenance");
    auto opt = [&](const char* k) { return v.value(k, std::string()); };
    p.provenance.source_passage_id = opt("source_passage_id");
    p.provenance.original_answer = opt("original_answer");
    p.provenance.counter_answer = opt("counter_answer");
    p.provenance.substitution_mode = opt("substitution_mode");
    p.provenance.claim = opt("claim");
    p.provenance.generation_prompt_hash = opt("generation_prompt_hash");
    p.provenance.support_retries = v.value("support_retries", 0);
  }
  return p;
}

json encode(const corpus::CandidateSet& set) {
  json passages = json::array();
  for (const auto& p : set.passages) passages.push_back(encode(p));
  json comp = json::object();
  for (const auto& [origin, count] : set.composition) {
    comp[std::string(corpus::to_string(origin))] = count;
  }
  return json{{"question_id", set.question_id},
              {"seed", set.seed},
              {"composition", comp},
              {"passages", passages}};
}

corpus::CandidateSet decode_candidate_set(const json& j) {
  corpus::CandidateSet set;
  set.question_id = field<std::string>(j, "question_id");
  set.seed = j.value("seed", std::uint64_t{0});
  for (const auto& p : j.at("passages")) set.passages.push_back(decode_passage(p));
  corpus::recount(set);
  return set;
}

json encode(const judge::JudgeConfig& c) {
  json j{{"form", judge::to_string(c.form)},
         {"judgment", judge::to_string(c.judgment)},
         {"requirement", judge::to_string(c.requirement)},
         {"order", judge::to_string(c.order)},
         {"k_samples", c.k_samples},
         {"seed", c.seed}};
  if (c.fixed_position) j["fixed_position"] = *c.fixed_position;
  if (!c.reprompt_on_parse_failure) j["reprompt"] = false;
  return j;
}

judge::JudgeConfig decode_judge_config(const json& j) {
  judge::JudgeConfig c;
  if (j.contains("form")) c.form = judge::parse_form(j.at("form").get<std::string>());
  if (j.contains("judgment")) {
    c.judgment = judge::parse_judgment(j.at("judgment").get<std::string>());
  }
  if (j.contains("requirement")) {
    c.requirement = judge::parse_requirement(j.at("requirement").get<std::string>());
  }
  if (j.contains("order")) c.order = judge::parse_input_order(j.at("order").get<std::string>());
  c.k_samples = j.value("k_samples", 1);
  c.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("fixed_position")) {
    c.fixed_position = j.at("fixed_position").get<std::size_t>();
  }
  c.reprompt_on_parse_failure = j.value("reprompt", true);
  judge::validate(c);
  return c;
}

json encode(const judge::JudgmentRecord& r) {
  json j{{"question_id", r.question_id},
         {"config", encode(r.config)},
         {"label", judge::label(r.config)}};
  if (r.result_kind == judge::ResultKind::SelectedSet) {
    j["selected"] = index_array(r.selected);
  } else {
    j["ranking"] = index_array(r.ranking);
  }
  j["call_count"] = r.call_count;
  j["reprompt_count"] = r.reprompt_count;
  j["parse_failures"] = r.parse_failures;
  j["presentation"] = index_array(r.presentation);
  j["prompt_hashes"] = r.prompt_hashes;
  j["raw_outputs"] = r.raw_outputs;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

judge::JudgmentRecord decode_judgment(const json& j) {
  judge::JudgmentRecord r;
  r.question_id = field<std::string>(j, "question_id");
  r.config = decode_judge_config(j.at("config"));
  if (j.contains("selected")) {
    r.result_kind = judge::ResultKind::SelectedSet;
    r.selected = j.at("selected").get<std::vector<std::size_t>>();
  } else {
    r.result_kind = judge::ResultKind::Ranking;
    r.ranking = field<std::vector<std::size_t>>(j, "ranking");
  }
  r.call_count = j.value("call_count", 0);
  r.reprompt_count = j.value("reprompt_count", 0);
  r.parse_failures = j.value("parse_failures", 0);
  r.presentation = j.value("presentation", std::vector<std::size_t>{});
  r.prompt_hashes = j.value("prompt_hashes", std::vector<std::string>{});
  r.raw_outputs = j.value("raw_outputs", std::vector<std::string>{});
  r.warnings = j.value("warnings", std::vector<std::string>{});
  return r;
}

json encode(const qa::EvidenceSource& s) {
  json j{{"kind", qa::to_string(s.kind)}};
  if (s.judge_config) j["judge"] = encode(*s.judge_config);
  return j;
}

qa::EvidenceSource decode_source(const json& j) {
  qa::EvidenceSource s;
  s.kind = qa::parse_evidence_kind(field<std::string>(j, "kind"));
  if (j.contains("judge")) s.judge_config = decode_judge_config(j.at("judge"));
  s.validate();
  return s;
}

json encode(const metrics::AnswerScore& s) {
  json j = json::object();
  j["em"] = s.em;
  j["token_f1"] = s.token_f1;
  j["rouge_l"] = s.rouge_l;
  json b = json::object();
  for (const auto& [n, v] : s.bleu) b[std::to_string(n)] = v;
  j["bleu"] = b;
  return j;
}

metrics::AnswerScore decode_score(const json& j) {
  metrics::AnswerScore s;
  s.em = j.value("em", 0);
  s.token_f1 = j.value("token_f1", 0.0);
  s.rouge_l = j.value("rouge_l", 0.0);
  if (j.contains("bleu")) {
    for (const auto& [k, v] : j.at("bleu").items()) s.bleu[std::stoi(k)] = v.get<double>();
  }
  return s;
}

json encode(const qa::AnswerRecord& r) {
  json j{{"question_id", r.question_id},
         {"source", encode(r.source)},
         {"label", r.source.label()},
         {"evidence_ids", r.evidence_ids},
         {"prompt_hash", r.prompt_hash},
         {"answer_text", r.answer_text},
         {"scored_as", corpus::to_string(r.scored_as)}};
  if (r.scores) j["scores"] = encode(*r.scores);
  return j;
}

qa::AnswerRecord decode_answer(const json& j) {
  qa::AnswerRecord r;
  r.question_id = field<std::string>(j, "question_id");
  r.source = decode_source(j.at("source"));
  r.evidence_ids = j.value("evidence_ids", std::vector<std::string>{});
  r.prompt_hash = j.value("prompt_hash", std::string());
  r.answer_text = field<std::string>(j, "answer_text");
  r.scored_as = corpus::parse_dataset_kind(field<std::string>(j, "scored_as"));
  if (j.contains("scores")) r.scores = decode_score(j.at("scores"));
  if (r.source.kind == qa::EvidenceKind::None && !r.evidence_ids.empty()) {
    throw ContractError("answer record without evidence lists evidence ids");
  }
  return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_jsonl(const std::filesystem::path& path, const Meta& meta,
                 const std::vector<json>& rows) {
  std::string text = encode(meta).dump() + "\n";
  for (const auto& r : rows) text += r.dump() + "\n";
  write_text(path, text);
}

JsonlFile read_jsonl(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::istringstream in(corpus::read_file(path));
  JsonlFile out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      throw ParseError("invalid JSON in " + path.filename().string(), n);
    }
    if (n == 1 && j.is_object() && j.contains("meta")) {
      out.meta = decode_meta(j);
      continue;
    }
    out.rows.push_back(std::move(j));
  }
  return out;
}

std::string csv_meta_line(const Meta& meta) {
  return "# seed=" + std::to_string(meta.seed) + " config_hash=" + meta.config_hash +
         " tool_version=" + meta.tool_version;
}

}  // namespace uj::records
