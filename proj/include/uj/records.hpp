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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "uj/corpus.hpp"
#include "uj/judge.hpp"
#include "uj/qa.hpp"

// JSON forms of the harness records and the line-delimited files they are
// stored in. Every file starts with a meta line naming the seed, the config
// hash and the tool version.
namespace uj::records {

using json = nlohmann::ordered_json;

struct Meta {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string tool_version{kToolVersion};

  friend bool operator==(const Meta&, const Meta&) = default;
};

json encode(const Meta& meta);
json encode(const corpus::Passage& passage);
json encode(const corpus::CandidateSet& set);
json encode(const judge::JudgeConfig& config);
json encode(const judge::JudgmentRecord& record);
json encode(const qa::EvidenceSource& source);
json encode(const metrics::AnswerScore& score);
json encode(const qa::AnswerRecord& record);

Meta decode_meta(const json& j);
corpus::Passage decode_passage(const json& j);
corpus::CandidateSet decode_candidate_set(const json& j);
judge::JudgeConfig decode_judge_config(const json& j);
judge::JudgmentRecord decode_judgment(const json& j);
qa::EvidenceSource decode_source(const json& j);
metrics::AnswerScore decode_score(const json& j);
qa::AnswerRecord decode_answer(const json& j);

/// Writes the meta line and one compact JSON object per line through a
/// temporary file renamed into place.
void write_jsonl(const std::filesystem::path& path, const Meta& meta,
                 const std::vector<json>& rows);

struct JsonlFile {
  std::optional<Meta> meta;
  std::vector<json> rows;
};

/// Throws IoError for a missing file and ParseError (with line) for bad JSON.
JsonlFile read_jsonl(const std::filesystem::path& path);

/// Writes `text` through a temporary file renamed into place.
void write_text(const std::filesystem::path& path, const std::string& text);

/// Comment line heading CSV reports.
std::string csv_meta_line(const Meta& meta);

}  // namespace uj::records
