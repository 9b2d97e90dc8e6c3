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

#include "uj/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace uj::corpus {

using nlohmann::json;

std::string_view to_string(DatasetKind kind) {
  return kind == DatasetKind::FQA ? "FQA" : "NFQA";
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::GroundTruth: return "GroundTruth";
    case Origin::Counterfactual: return "Counterfactual";
    case Origin::HRNP: return "HRNP";
    case Origin::WRNP: return "WRNP";
    case Origin::Retrieved: return "Retrieved";
  }
  return "Retrieved";
}

DatasetKind parse_dataset_kind(std::string_view s) {
  if (s == "FQA" || s == "fqa") return DatasetKind::FQA;
  if (s == "NFQA" || s == "nfqa") return DatasetKind::NFQA;
  throw ContractError("unknown dataset kind '" + std::string(s) + "'");
}

Origin parse_origin(std::string_view s) {
  for (Origin o : {Origin::GroundTruth, Origin::Counterfactual, Origin::HRNP,
                   Origin::WRNP, Origin::Retrieved}) {
    if (to_string(o) == s) return o;
  }
  throw ContractError("unknown passage origin '" + std::string(s) + "'");
}

bool Question::is_ground_truth(std::string_view passage_id) const {
  return std::find(ground_truth_evidence_ids.begin(),
                   ground_truth_evidence_ids.end(),
                   passage_id) != ground_truth_evidence_ids.end();
}

bool Provenance::empty() const { return *this == Provenance{}; }

void validate(const Passage& passage) {
  if (passage.text.empty()) {
    throw ContractError("passage '" + passage.id + "' has empty text");
  }
  if (passage.origin == Origin::Counterfactual &&
      passage.provenance.counter_answer.empty()) {
    throw ContractError("counterfactual passage '" + passage.id +
                        "' does not record its counter-answer");
  }
}

std::vector<std::size_t> CandidateSet::ground_truth_indices(
    const Question& question) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    const Passage& p = passages[i];
    if (p.origin == Origin::GroundTruth ||
        (p.origin == Origin::Retrieved && question.is_ground_truth(p.id))) {
      out.push_back(i);
    }
  }
  return out;
}

void recount(CandidateSet& set) {
  set.composition.clear();
  for (const Passage& p : set.passages) ++set.composition[p.origin];
}

CandidateSet place_ground_truth(const CandidateSet& set,
                                const Question& question,
                                std::size_t position) {
  const auto gt = set.ground_truth_indices(question);
  if (gt.empty()) return set;
  std::vector<Passage> gold;
  std::vector<Passage> rest;
  std::size_t next_gt = 0;
  for (std::size_t i = 0; i < set.passages.size(); ++i) {
    if (next_gt < gt.size() && gt[next_gt] == i) {
      gold.push_back(set.passages[i]);
      ++next_gt;
    } else {
      rest.push_back(set.passages[i]);
    }
  }
  const std::size_t start = std::min(position, rest.size());
  CandidateSet out = set;
  out.passages.clear();
  out.passages.insert(out.passages.end(), rest.begin(), rest.begin() + start);
  out.passages.insert(out.passages.end(), gold.begin(), gold.end());
  out.passages.insert(out.passages.end(), rest.begin() + start, rest.end());
  return out;
}

void PassageStore::add(Passage passage) {
  std::string id = passage.id;
  by_id_.insert_or_assign(std::move(id), std::move(passage));
}

const Passage* PassageStore::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &it->second;
}

const Passage& PassageStore::at(std::string_view id) const {
  const Passage* p = find(id);
  if (p == nullptr) {
    throw LookupError("passage '" + std::string(id) + "' not in corpus");
  }
  return *p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Calls fn(line, line_number) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      fn(line, line_no);
    }
    pos = end + 1;
  }
}

json parse_record(std::string_view line, std::size_t line_no) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw ParseError("record is not an object", line_no);
    return j;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed record: ") + e.what(), line_no);
  }
}

const json& require(const json& record, const char* field,
                    std::size_t line_no) {
  auto it = record.find(field);
  if (it == record.end()) {
    throw ParseError(std::string("missing field \"") + field + "\"", line_no);
  }
  return *it;
}

std::vector<std::string> string_list(const json& value, const char* field,
                                     std::size_t line_no) {
  if (!value.is_array()) {
    throw ParseError(std::string("field \"") + field + "\" is not a list",
                     line_no);
  }
  std::vector<std::string> out;
  for (const json& v : value) {
    if (!v.is_string()) {
      throw ParseError(std::string("field \"") + field +
                           "\" has a non-string entry",
                       line_no);
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<Question> parse_questions(std::string_view text,
                                      DatasetKind kind) {
  std::vector<Question> out;
  std::unordered_set<std::string> seen;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    json r = parse_record(line, line_no);
    Question q;
    const json& id = require(r, "id", line_no);
    const json& question = require(r, "question", line_no);
    if (!id.is_string() || id.get<std::string>().empty()) {
      throw ParseError("field \"id\" must be a non-empty string", line_no);
    }
    if (!question.is_string()) {
      throw ParseError("field \"question\" must be a string", line_no);
    }
    q.id = id.get<std::string>();
    q.text = question.get<std::string>();
    q.gold_answers = string_list(require(r, "answers", line_no), "answers",
                                 line_no);
    q.ground_truth_evidence_ids = string_list(
        require(r, "ground_truth_ids", line_no), "ground_truth_ids", line_no);
    if (q.gold_answers.empty()) {
      throw ParseError("field \"answers\" is empty", line_no);
    }
    if (auto it = r.find("is_selected"); it != r.end()) {
      if (!it->is_object()) {
        throw ParseError("field \"is_selected\" is not an object", line_no);
      }
      for (const auto& [pid, label] : it->items()) {
        q.is_selected[pid] = label.get<int>();
      }
    }
    q.dataset_kind = kind;
    if (!seen.insert(q.id).second) {
      throw ParseError("duplicate question id '" + q.id + "'", line_no);
    }
    out.push_back(std::move(q));
  });
  return out;
}

std::vector<Question> load_questions(const std::filesystem::path& path,
                                     DatasetKind kind) {
  return parse_questions(read_file(path), kind);
}

PassageStore parse_passages(std::string_view text) {
  PassageStore store;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    json r = parse_record(line, line_no);
    Passage p;
    p.id = require(r, "id", line_no).get<std::string>();
    p.text = require(r, "text", line_no).get<std::string>();
    if (p.text.empty()) throw ParseError("empty passage text", line_no);
    p.origin = Origin::Retrieved;
    store.add(std::move(p));
  });
  return store;
}

PassageStore load_passages(const std::filesystem::path& path) {
  return parse_passages(read_file(path));
}

RetrievalRun parse_run(std::string_view text) {
  RetrievalRun run;
  std::set<std::pair<std::string, std::string>> seen;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    std::istringstream ss{std::string(line)};
    std::vector<std::string> f;
    for (std::string tok; ss >> tok;) f.push_back(tok);
    if (f.size() != 6) {
      throw ParseError("expected 6 fields, got " + std::to_string(f.size()),
                       line_no);
    }
    RunEntry e;
    e.passage_id = f[2];
    auto [rp, rec] =
        std::from_chars(f[3].data(), f[3].data() + f[3].size(), e.rank);
    if (rec != std::errc{} || rp != f[3].data() + f[3].size() || e.rank < 1) {
      throw ParseError("non-integer rank '" + f[3] + "'", line_no);
    }
    try {
      std::size_t used = 0;
      e.score = std::stod(f[4], &used);
      if (used != f[4].size()) throw std::invalid_argument(f[4]);
    } catch (const std::exception&) {
      throw ParseError("non-numeric score '" + f[4] + "'", line_no);
    }
    if (!seen.emplace(f[0], f[2]).second) {
      throw ParseError("duplicate (" + f[0] + ", " + f[2] + ")", line_no);
    }
    auto& entries = run[f[0]];
    const int expected = static_cast<int>(entries.size()) + 1;
    if (e.rank != expected) {
      if (e.rank > expected) throw ParseError("rank gap", line_no);
      throw ParseError("rank out of order", line_no);
    }
    if (entries.size() >= kMaxRunDepth) {
      throw ParseError("run depth exceeds " + std::to_string(kMaxRunDepth),
                       line_no);
    }
    entries.push_back(std::move(e));
  });
  return run;
}

RetrievalRun load_run(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw IoError("run file '" + path.string() + "' does not exist");
  }
  return parse_run(read_file(path));
}

std::string serialize_run(const RetrievalRun& run, std::string_view tag) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [qid, entries] : run) {
    for (const RunEntry& e : entries) {
      out << qid << " Q0 " << e.passage_id << ' ' << e.rank << ' ' << e.score
          << ' ' << tag << '\n';
    }
  }
  return out.str();
}

namespace {

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && std::ispunct(c) != 0;
}

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::vector<std::string> normalized_tokens(std::string_view s) {
  std::string cleaned;
  cleaned.reserve(s.size());
  for (unsigned char c : s) {
    if (is_ascii_punct(c)) continue;
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    cleaned.push_back(static_cast<char>(c));
  }
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && cur != "a" && cur != "an" && cur != "the") {
      tokens.push_back(cur);
    }
    cur.clear();
  };
  for (unsigned char c : cleaned) {
    if (is_ascii_space(c)) {
      flush();
    } else {
      cur.push_back(static_cast<char>(c));
    }
  }
  flush();
  return tokens;
}

std::string normalize_text(std::string_view s) {
  std::string out;
  for (const std::string& t : normalized_tokens(s)) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

bool contains_answer(std::string_view passage_text,
                     std::span<const std::string> answers) {
  if (answers.empty()) throw ContractError("contains_answer: no answers");
  const std::string hay = normalize_text(passage_text);
  for (const std::string& a : answers) {
    const std::string needle = normalize_text(a);
    if (!needle.empty() && hay.find(needle) != std::string::npos) return true;
  }
  return false;
}

bool contains_answer(const Passage& passage,
                     std::span<const std::string> answers) {
  return contains_answer(passage.text, answers);
}

}  // namespace uj::corpus
