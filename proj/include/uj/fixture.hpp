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
#include <string>
#include <vector>

#include "uj/clients.hpp"
#include "uj/corpus.hpp"

// Synthetic question/passage/run data with known answers, for demos and
// tests. Names and topic words are made-up six-letter words so no answer is
// a substring of an unrelated passage.
namespace uj::fixture {

struct FixtureOptions {
  std::size_t questions = 50;
  std::size_t gold_per_question = 1;
  std::size_t run_depth = 40;
  // Share of questions whose gold passage sits in the run's top 10; the
  // rest have it between ranks 11 and 20.
  double gold_in_top10 = 0.7;
  corpus::DatasetKind kind = corpus::DatasetKind::FQA;
  std::uint64_t seed = 1;
};

struct Fixture {
  std::vector<corpus::Question> questions;
  std::vector<corpus::Passage> passages;
  corpus::RetrievalRun run;
  std::map<std::string, clients::EntityCategory> gazetteer;

  corpus::PassageStore store() const;
};

Fixture make_fixture(const FixtureOptions& options);

/// Writes questions.jsonl, passages.jsonl, run.trec, gazetteer.json and a
/// config.json pointing at them (mock backends, out dir "out").
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir,
                   corpus::DatasetKind kind, std::uint64_t seed);

}  // namespace uj::fixture
