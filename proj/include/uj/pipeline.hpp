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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "uj/clients.hpp"
#include "uj/corpus.hpp"
#include "uj/judge.hpp"
#include "uj/mock_llm.hpp"
#include "uj/qa.hpp"
#include "uj/records.hpp"

// The build -> judge -> qa -> report workflow behind the ujudge tool. Every
// step reads and writes files under RunConfig::out.
namespace uj::pipeline {

namespace fs = std::filesystem;

enum class Benchmark { GTI, GTU };
std::string_view to_string(Benchmark b);
Benchmark parse_benchmark(std::string_view s);

struct RunConfig {
  fs::path questions;
  fs::path passages;
  fs::path run;
  fs::path out = "out";
  corpus::DatasetKind dataset_kind = corpus::DatasetKind::FQA;
  Benchmark benchmark = Benchmark::GTI;
  std::size_t candidates = corpus::kDefaultCandidateCount;
  // Build-time placement of the gold block; shuffled when unset.
  std::optional<std::size_t> ground_truth_position;

  std::vector<judge::JudgeConfig> grid = default_grid();
  // "none", "dense", "ground_truth" or a grid label; empty means all three
  // plain sources followed by every grid entry.
  std::vector<std::string> sources;

  // http | mock:oracle | mock:noisy | mock:scripted
  std::string backend = "mock:oracle";
  clients::HttpChatConfig http;
  fs::path script;  // mock:scripted responses (JSONL)
  mock::NoiseModel noise;

  // NER/NLI for benchmark construction: "mock" (gazetteer + table) or "http"
  // (sidecar at sidecar.endpoint).
  std::string sidecar_backend = "mock";
  clients::SidecarConfig sidecar;
  std::map<std::string, clients::EntityCategory> gazetteer;

  std::uint64_t seed = 0;
  int parallelism = 4;

  static std::vector<judge::JudgeConfig> default_grid();
};

/// Applies a JSON config document over `config`. Relative paths resolve
/// against `base_dir`. Unknown keys are rejected.
void apply_json(RunConfig& config, const nlohmann::json& doc,
                const fs::path& base_dir);

RunConfig load_config(const fs::path& path);

/// Canonical JSON of everything that affects outputs (the out dir excluded).
nlohmann::json canonical(const RunConfig& config);
std::string config_hash(const RunConfig& config);
records::Meta meta_for(const RunConfig& config);

/// Judge seeds left at 0 in the grid take the global seed.
void resolve_grid_seeds(RunConfig& config);

struct CommandResult {
  int exit_code = 0;  // 0 clean, 1 per-question errors
  std::string report;  // human-readable table(s)
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
};

/// Candidate sets -> out/candidates.jsonl, summary -> out/build_summary.{txt,csv}.
CommandResult run_build(const RunConfig& config);

/// Judgments per grid entry -> out/judgments/<label>.jsonl, metrics ->
/// out/judge_metrics.{txt,csv}. The backend is constructed before any call.
CommandResult run_judge(const RunConfig& config);

/// Answers per source -> out/answers/<label>.jsonl, report ->
/// out/qa_report.{txt,csv}.
CommandResult run_qa(const RunConfig& config);

/// Recomputes both reports from the files on disk without model calls.
CommandResult run_report(const RunConfig& config);

/// Chat client for config.backend. Oracle backends read their labels from
/// `knowledge`.
std::unique_ptr<clients::ChatClient> make_chat_client(
    const RunConfig& config, std::shared_ptr<const mock::OracleKnowledge> knowledge);

/// Display name of an evidence source in the QA table.
std::string row_name(const qa::EvidenceSource& source);

// Aligned text tables and CSV for the reports.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_text() const;
  std::string to_csv() const;
};

std::string fixed2(double v);

}  // namespace uj::pipeline
