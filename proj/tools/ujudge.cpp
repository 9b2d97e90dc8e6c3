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

// ujudge: build benchmark candidate sets, run LLM judges, answer questions
// with the selected evidence, and print the report tables.

#include <iostream>

#include "CLI11.hpp"
#include "uj/pipeline.hpp"

namespace {

using uj::pipeline::CommandResult;
using uj::pipeline::RunConfig;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend;
  std::optional<std::string> out;
  std::optional<std::string> questions;
  std::optional<std::string> passages;
  std::optional<std::string> run;
  std::optional<std::string> mode;
  std::optional<std::string> kind;
  std::optional<std::string> script;
  std::optional<int> parallelism;
  std::optional<std::size_t> position;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration");
  cmd->add_option("--seed", o.seed, "Global seed");
  cmd->add_option("--backend", o.backend,
                  "http | mock:oracle | mock:noisy | mock:scripted");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--questions", o.questions, "Questions JSONL");
  cmd->add_option("--passages", o.passages, "Passage corpus JSONL");
  cmd->add_option("--run", o.run, "TREC run file");
  cmd->add_option("--mode", o.mode, "GTI | GTU");
  cmd->add_option("--kind", o.kind, "FQA | NFQA");
  cmd->add_option("--script", o.script, "Scripted responses for mock:scripted");
  cmd->add_option("--parallelism", o.parallelism, "Concurrent model calls");
  cmd->add_option("--gt-position", o.position,
                  "Place the gold passages at this 0-based position (build)");
  cmd->add_flag("-q,--quiet", o.quiet, "Print errors only");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : uj::pipeline::load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.backend) c.backend = *o.backend;
  if (o.out) c.out = *o.out;
  if (o.questions) c.questions = *o.questions;
  if (o.passages) c.passages = *o.passages;
  if (o.run) c.run = *o.run;
  if (o.mode) c.benchmark = uj::pipeline::parse_benchmark(*o.mode);
  if (o.kind) c.dataset_kind = uj::corpus::parse_dataset_kind(*o.kind);
  if (o.script) c.script = *o.script;
  if (o.parallelism) c.parallelism = *o.parallelism;
  if (o.position) c.ground_truth_position = *o.position;
  return c;
}

int finish(const CommandResult& r, bool quiet) {
  if (!quiet) std::cout << r.report;
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : r.errors) std::cerr << "error: " << e << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LLM utility-judgment benchmark harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(uj::kToolVersion));

  Overrides o;
  auto* build = app.add_subcommand("build", "Build GTI/GTU candidate sets");
  auto* judge = app.add_subcommand("judge", "Run the judge grid over the candidate sets");
  auto* qa = app.add_subcommand("qa", "Generate and score answers per evidence source");
  auto* report = app.add_subcommand("report", "Recompute the report tables from disk");
  for (auto* cmd : {build, judge, qa, report}) add_common(cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = resolve(o);
    if (build->parsed()) return finish(uj::pipeline::run_build(config), o.quiet);
    if (judge->parsed()) return finish(uj::pipeline::run_judge(config), o.quiet);
    if (qa->parsed()) return finish(uj::pipeline::run_qa(config), o.quiet);
    return finish(uj::pipeline::run_report(config), o.quiet);
  } catch (const uj::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
