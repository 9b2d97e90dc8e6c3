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

// make_fixture: writes a synthetic question set, passage corpus, TREC run,
// gazetteer and config for trying out ujudge offline.

#include <iostream>

#include "CLI11.hpp"
#include "uj/fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic ujudge fixture"};
  std::string dir = "fixture";
  std::string kind = "FQA";
  uj::fixture::FixtureOptions options;
  app.add_option("dir", dir, "Output directory");
  app.add_option("-n,--questions", options.questions, "Number of questions");
  app.add_option("-g,--gold", options.gold_per_question, "Gold passages per question (1 or 2)");
  app.add_option("--depth", options.run_depth, "Run depth per question");
  app.add_option("--top10", options.gold_in_top10,
                 "Share of questions with gold in the top 10");
  app.add_option("--kind", kind, "FQA | NFQA");
  app.add_option("--seed", options.seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  try {
    options.kind = uj::corpus::parse_dataset_kind(kind);
    const auto f = uj::fixture::make_fixture(options);
    uj::fixture::write_fixture(f, dir, options.kind, options.seed);
    std::cout << "wrote " << f.questions.size() << " questions and "
              << f.passages.size() << " passages to " << dir << "\n";
  } catch (const uj::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
