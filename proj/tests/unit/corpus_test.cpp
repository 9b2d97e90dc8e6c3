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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "uj/corpus.hpp"

namespace {

using namespace uj::corpus;

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize_text("The Cat!"), "cat");
  EXPECT_EQ(normalize_text("An  apple, a day."), "apple day");
  EXPECT_EQ(normalize_text(""), "");
  EXPECT_EQ(normalize_text("  \t\n"), "");
}

TEST(Normalize, Idempotent) {
  for (const char* s : {"The Cat!", "An  apple, a day.", "Hello,World -- x", "A a AN the"}) {
    const std::string once = normalize_text(s);
    EXPECT_EQ(normalize_text(once), once);
  }
}

TEST(ContainsAnswer, NormalizedContainment) {
  const std::vector<std::string> hamlet = {"the hamlet"};
  EXPECT_TRUE(contains_answer("The Hamlet play", hamlet));
  EXPECT_TRUE(contains_answer("It opened in 1923, they say.", std::vector<std::string>{"1923"}));
  EXPECT_FALSE(contains_answer("Nothing here", hamlet));
  EXPECT_THROW(contains_answer("x", std::vector<std::string>{}), uj::ContractError);
}

TEST(LoadQuestions, ParsesAndKeepsOrder) {
  const auto qs = parse_questions(
      "{\"id\":\"q1\",\"question\":\"Who?\",\"answers\":[\"A\"],\"ground_truth_ids\":[\"p1\"]}\n"
      "\n"
      "{\"id\":\"q2\",\"question\":\"What?\",\"answers\":[\"B\",\"C\"],\"ground_truth_ids\":[]}\n",
      DatasetKind::NFQA);
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[0].id, "q1");
  EXPECT_EQ(qs[1].gold_answers.size(), 2u);
  EXPECT_EQ(qs[1].dataset_kind, DatasetKind::NFQA);
  EXPECT_TRUE(qs[0].is_ground_truth("p1"));
}

TEST(LoadQuestions, MissingFieldNamesFieldAndLine) {
  try {
    parse_questions("{\"id\":\"q1\",\"question\":\"Who?\",\"ground_truth_ids\":[]}\n",
                    DatasetKind::FQA);
    FAIL() << "expected ParseError";
  } catch (const uj::ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("missing field \"answers\" at line 1"),
              std::string::npos);
  }
}

TEST(LoadQuestions, RejectsDuplicatesAndMalformed) {
  EXPECT_THROW(parse_questions("{\"id\":\"q\",\"question\":\"a\",\"answers\":[\"x\"],"
                               "\"ground_truth_ids\":[]}\n"
                               "{\"id\":\"q\",\"question\":\"b\",\"answers\":[\"x\"],"
                               "\"ground_truth_ids\":[]}\n",
                               DatasetKind::FQA),
               uj::ParseError);
  EXPECT_THROW(parse_questions("{not json\n", DatasetKind::FQA), uj::ParseError);
  EXPECT_THROW(parse_questions("{\"id\":\"q\",\"question\":\"a\",\"answers\":[],"
                               "\"ground_truth_ids\":[]}\n",
                               DatasetKind::FQA),
               uj::ParseError);
}

TEST(LoadRun, RankGapReported) {
  try {
    parse_run("q1 Q0 p1 1 9.0 r\nq1 Q0 p2 3 8.0 r\n");
    FAIL() << "expected ParseError";
  } catch (const uj::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("rank gap at line 2"), std::string::npos);
  }
}

TEST(LoadRun, Errors) {
  EXPECT_THROW(parse_run("q1 Q0 p1 1 x r\n"), uj::ParseError);
  EXPECT_THROW(parse_run("q1 Q0 p1 1 1.0\n"), uj::ParseError);
  EXPECT_THROW(parse_run("q1 Q0 p1 1 1.0 r\nq1 Q0 p1 2 0.5 r\n"), uj::ParseError);
  std::string deep;
  for (int i = 1; i <= 101; ++i) {
    deep += "q1 Q0 p" + std::to_string(i) + " " + std::to_string(i) + " 1.0 r\n";
  }
  EXPECT_THROW(parse_run(deep), uj::ParseError);
  EXPECT_THROW(load_run("/nonexistent/run.trec"), uj::IoError);
}

TEST(LoadRun, SerializeRoundTrip) {
  RetrievalRun run;
  run["q1"] = {{"p1", 1, 3.5}, {"p2", 2, 1.25}};
  run["q2"] = {{"p9", 1, -0.5}};
  EXPECT_EQ(parse_run(serialize_run(run)), run);
}

TEST(PassageStore, LoadAndLookup) {
  auto store = parse_passages("{\"id\":\"p1\",\"text\":\"Hello\"}\n{\"id\":\"p2\",\"text\":\"World\"}\n");
  EXPECT_EQ(store.size(), 2u);
  EXPECT_EQ(store.at("p2").text, "World");
  EXPECT_EQ(store.find("p3"), nullptr);
  EXPECT_THROW(store.at("p3"), uj::LookupError);
  EXPECT_THROW(parse_passages("{\"id\":\"p1\",\"text\":\"\"}\n"), uj::ParseError);
}

TEST(LoadFiles, MissingFileIsIoError) {
  EXPECT_THROW(load_questions("/nonexistent/q.jsonl", DatasetKind::FQA), uj::IoError);
  EXPECT_THROW(load_passages("/nonexistent/p.jsonl"), uj::IoError);
}

TEST(Passage, CounterfactualNeedsProvenance) {
  Passage p{"c1", "text", Origin::Counterfactual, {}};
  EXPECT_THROW(validate(p), uj::ContractError);
  p.provenance.counter_answer = "B";
  p.provenance.original_answer = "A";
  p.provenance.source_passage_id = "g";
  EXPECT_NO_THROW(validate(p));
}

TEST(PlaceGroundTruth, MovesGoldKeepingOthersInOrder) {
  Question q;
  q.id = "q";
  q.ground_truth_evidence_ids = {"g"};
  CandidateSet set;
  for (const char* id : {"a", "b", "g", "c"}) set.passages.push_back({id, id, Origin::Retrieved, {}});
  set.passages[2].origin = Origin::GroundTruth;
  for (std::size_t pos = 0; pos < 4; ++pos) {
    auto out = place_ground_truth(set, q, pos);
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out.passages[pos].id, "g");
    std::vector<std::string> rest;
    for (const auto& p : out.passages) {
      if (p.id != "g") rest.push_back(p.id);
    }
    EXPECT_EQ(rest, (std::vector<std::string>{"a", "b", "c"}));
  }
  EXPECT_EQ(place_ground_truth(set, q, 99).passages.back().id, "g");
}

}  // namespace
