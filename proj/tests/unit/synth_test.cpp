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

#include <algorithm>
#include <map>

#include "uj/synth.hpp"

namespace {

using namespace uj::synth;
using uj::clients::EntityCategory;
using uj::corpus::Origin;

EntityCorpus rich_corpus() {
  EntityCorpus c;
  for (const char* y : {"1987", "1990", "1991", "1975", "1960", "1944", "2001", "1999"}) {
    c.add(EntityCategory::Date, y);
  }
  for (const char* p : {"Paris", "Lyon", "Oslo", "Lima", "Quito", "Cairo"}) {
    c.add(EntityCategory::Location, p);
  }
  return c;
}

Passage passage(std::string id, std::string text) {
  return Passage{std::move(id), std::move(text), Origin::Retrieved, {}};
}

Question question(std::string id, std::string text, std::vector<std::string> answers,
                  std::vector<std::string> gold_ids = {}) {
  Question q;
  q.id = std::move(id);
  q.text = std::move(text);
  q.gold_answers = std::move(answers);
  q.ground_truth_evidence_ids = std::move(gold_ids);
  return q;
}

TEST(EntityCorpus, BuildFromAnswersDedupsAndSkipsOther) {
  uj::clients::GazetteerNer ner({{"Paris", EntityCategory::Location},
                                 {"1987", EntityCategory::Date}});
  std::vector<Question> qs = {question("a", "?", {"Paris", "1987"}),
                              question("b", "?", {"Paris"}),
                              question("c", "?", {"a blue thing"})};
  auto c = build_entity_corpus(qs, ner);
  EXPECT_EQ(c.entities(EntityCategory::Location), std::vector<std::string>{"Paris"});
  EXPECT_EQ(c.entities(EntityCategory::Date), std::vector<std::string>{"1987"});
  EXPECT_EQ(c.skipped_other, 1u);
  EXPECT_TRUE(build_entity_corpus({}, ner).empty());
}

TEST(EntityCorpus, SentenceAnswersContributeTheirSpans) {
  uj::clients::GazetteerNer ner({{"Paris", EntityCategory::Location}});
  auto c = build_entity_corpus({question("a", "?", {"It is located in Paris."})}, ner);
  EXPECT_EQ(c.entities(EntityCategory::Location), std::vector<std::string>{"Paris"});
}

TEST(Substitute, ReplacesEveryOccurrence) {
  EntityCorpus c;
  c.add(EntityCategory::Date, "1987");
  c.add(EntityCategory::Date, "1990");
  auto r = substitute_entities(passage("g", "X won in 1987. 1987 was a good year."), "1987", c,
                               SubstitutionMode::CorpusSubstitution, 5);
  EXPECT_EQ(r.passage.text, "X won in 1990. 1990 was a good year.");
  EXPECT_EQ(r.passage.origin, Origin::Counterfactual);
  EXPECT_EQ(r.passage.provenance.original_answer, "1987");
  EXPECT_EQ(r.passage.provenance.counter_answer, "1990");
  EXPECT_EQ(r.spec.counter_category, EntityCategory::Date);
  EXPECT_NO_THROW(uj::corpus::validate(r.passage));
}

TEST(Substitute, CaseInsensitiveWholeOccurrence) {
  EntityCorpus c;
  c.add(EntityCategory::Location, "Paris");
  c.add(EntityCategory::Location, "Lyon");
  auto r = substitute_entities(passage("g", "PARIS is big; Parisians love paris."), "Paris", c,
                               SubstitutionMode::CorpusSubstitution, 1);
  EXPECT_EQ(r.passage.text, "Lyon is big; Parisians love Lyon.");
}

TEST(Substitute, ExhaustionAndMissingAnswer) {
  EntityCorpus c;
  c.add(EntityCategory::Date, "1987");
  EXPECT_THROW(substitute_entities(passage("g", "in 1987"), "1987", c,
                                   SubstitutionMode::CorpusSubstitution, 1),
               ExhaustionError);
  EXPECT_THROW(substitute_entities(passage("g", "no year"), "1987", c,
                                   SubstitutionMode::CorpusSubstitution, 1),
               uj::ContractError);
}

TEST(Substitute, ModesRespectCategories) {
  const EntityCorpus c = rich_corpus();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto cs = substitute_entities(passage("g", "Built in 1987."), "1987", c,
                                  SubstitutionMode::CorpusSubstitution, seed);
    EXPECT_EQ(c.category_of(cs.spec.counter_answer), EntityCategory::Date);
    EXPECT_NE(cs.spec.counter_answer, "1987");
    auto ts = substitute_entities(passage("g", "Built in 1987."), "1987", c,
                                  SubstitutionMode::TypeSwap, seed);
    EXPECT_EQ(c.category_of(ts.spec.counter_answer), EntityCategory::Location);
  }
}

TEST(Substitute, DeterministicPerSeed) {
  const EntityCorpus c = rich_corpus();
  const auto p = passage("g", "Built in 1987.");
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto a = substitute_entities(p, "1987", c, SubstitutionMode::CorpusSubstitution, seed);
    auto b = substitute_entities(p, "1987", c, SubstitutionMode::CorpusSubstitution, seed);
    EXPECT_EQ(a.passage, b.passage);
    seen.insert(a.spec.counter_answer);
  }
  EXPECT_GT(seen.size(), 1u);
}

TEST(Substitute, CounterAnswerAlreadyInTextIsIneligible) {
  EntityCorpus c;
  c.add(EntityCategory::Date, "1987");
  c.add(EntityCategory::Date, "1990");
  c.add(EntityCategory::Date, "1991");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = substitute_entities(passage("g", "From 1987 to 1990."), "1987", c,
                                 SubstitutionMode::CorpusSubstitution, seed);
    EXPECT_EQ(r.spec.counter_answer, "1991");
  }
}

TEST(SubstitutionSet, RichCorpusGivesFivePerMode) {
  const EntityCorpus c = rich_corpus();
  const auto q = question("q", "When was it built?", {"1987"});
  const auto out = make_counterfactuals_substitution(q, passage("g", "Built in 1987."), c, 3);
  ASSERT_EQ(out.size(), 10u);
  std::map<std::string, std::set<std::string>> by_mode;
  for (const auto& p : out) by_mode[p.provenance.substitution_mode].insert(p.provenance.counter_answer);
  EXPECT_EQ(by_mode["CorpusSubstitution"].size(), 5u);
  EXPECT_EQ(by_mode["TypeSwap"].size(), 5u);
  EXPECT_EQ(out, make_counterfactuals_substitution(q, passage("g", "Built in 1987."), c, 3));
}

TEST(SubstitutionSet, SingleAlternativeDedupsToOne) {
  EntityCorpus c;
  c.add(EntityCategory::Date, "1987");
  c.add(EntityCategory::Date, "1990");
  std::vector<SynthWarning> warnings;
  const auto out = make_counterfactuals_substitution(
      question("q", "?", {"1987"}), passage("g", "In 1987."), c, 1, &warnings);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].provenance.counter_answer, "1990");
  EXPECT_FALSE(warnings.empty());
}

TEST(SubstitutionSet, BothModesExhaustedWarns) {
  EntityCorpus c;
  c.add(EntityCategory::Date, "1987");
  std::vector<SynthWarning> warnings;
  const auto out = make_counterfactuals_substitution(
      question("q", "?", {"1987"}), passage("g", "In 1987."), c, 1, &warnings);
  EXPECT_TRUE(out.empty());
  const bool found = std::any_of(warnings.begin(), warnings.end(), [](const auto& w) {
    return w.message.find("both substitution categories exhausted") != std::string::npos;
  });
  EXPECT_TRUE(found);
}

TEST(Truncate, CutsAtSentenceBoundary) {
  std::string text;
  for (int i = 0; i < 60; ++i) text += "word ";
  text += "end. ";
  for (int i = 0; i < 60; ++i) text += "more ";
  const std::string t = truncate_words(text, 100);
  EXPECT_TRUE(t.ends_with("end."));
  EXPECT_EQ(truncate_words("short text", 100), "short text");
}

TEST(FabricationPrompt, Verbatim) {
  const std::string p = fabrication_prompt("The sky is green.");
  EXPECT_TRUE(p.starts_with("Given a claim, please write a short piece of evidence to support it. "
                            "The maximum length of the generated evidence is 100 words."));
  EXPECT_NE(p.find("The sky is green."), std::string::npos);
}

struct GenerationRig {
  uj::clients::GazetteerNer ner{{{"Alice Smith", EntityCategory::Person},
                                 {"Bob Jones", EntityCategory::Person},
                                 {"Paris", EntityCategory::Location}}};
  uj::clients::TableNli nli;
  EntityCorpus corpus;
  std::map<std::string, int> calls;
  std::vector<double> temperatures;
  std::unique_ptr<uj::clients::FunctionChatClient> llm;

  GenerationRig() {
    corpus.add(EntityCategory::Person, "Alice Smith");
    corpus.add(EntityCategory::Person, "Bob Jones");
    corpus.add(EntityCategory::Location, "Paris");
    nli.set_default(uj::clients::NliLabel::Neutral);
  }

  void use(uj::clients::FunctionChatClient::Handler h) {
    llm = std::make_unique<uj::clients::FunctionChatClient>("test", std::move(h));
  }
};

const std::string kAnswer = "Alice Smith founded the guild.";
const std::string kBobClaim = "Bob Jones founded the guild.";
const std::string kParisClaim = "Paris founded the guild.";

TEST(Generated, SupportCheckRetriedUntilEntailed) {
  GenerationRig rig;
  const auto contra = uj::clients::make_verdict(uj::clients::NliLabel::Contradiction);
  rig.nli.set(kAnswer, kBobClaim, contra);
  rig.nli.set("Records show " + kBobClaim, kBobClaim,
              uj::clients::make_verdict(uj::clients::NliLabel::Entailment));
  rig.use([&](const uj::clients::ChatRequest& r) {
    rig.temperatures.push_back(r.temperature);
    const int n = ++rig.calls[r.user_message];
    return n < 3 ? "Draft number " + std::to_string(n) + "." : "Records show " + kBobClaim;
  });
  std::vector<SynthWarning> warnings;
  const auto out = make_counterfactuals_generated(
      question("q", "Who founded the guild?", {kAnswer}), passage("g", kAnswer), kAnswer,
      rig.corpus, {*rig.llm, rig.ner, rig.nli}, 7, &warnings);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].provenance.claim, kBobClaim);
  EXPECT_EQ(out[0].provenance.support_retries, 2);
  EXPECT_EQ(out[0].provenance.generation_prompt_hash,
            uj::clients::prompt_hash(fabrication_prompt(kBobClaim)));
  EXPECT_EQ(out[0].text, "Records show " + kBobClaim);
  EXPECT_EQ(rig.calls[fabrication_prompt(kBobClaim)], 3);
  EXPECT_EQ(rig.calls.count(fabrication_prompt(kParisClaim)), 0u);
  for (double t : rig.temperatures) EXPECT_DOUBLE_EQ(t, 0.7);
}

TEST(Generated, NeutralClaimsYieldNothing) {
  GenerationRig rig;
  rig.use([&](const uj::clients::ChatRequest&) -> std::string {
    ADD_FAILURE() << "no claim should reach fabrication";
    return "x";
  });
  std::vector<SynthWarning> warnings;
  const auto out = make_counterfactuals_generated(
      question("q", "Who founded the guild?", {kAnswer}), passage("g", kAnswer), kAnswer,
      rig.corpus, {*rig.llm, rig.ner, rig.nli}, 7, &warnings);
  EXPECT_TRUE(out.empty());
  EXPECT_FALSE(warnings.empty());
}

TEST(Generated, SupportFailuresBeyondCapDropClaim) {
  GenerationRig rig;
  rig.nli.set(kAnswer, kBobClaim, uj::clients::make_verdict(uj::clients::NliLabel::Contradiction));
  rig.use([&](const uj::clients::ChatRequest& r) {
    ++rig.calls[r.user_message];
    return std::string("Unrelated text.");
  });
  const auto out = make_counterfactuals_generated(
      question("q", "Who founded the guild?", {kAnswer}), passage("g", kAnswer), kAnswer,
      rig.corpus, {*rig.llm, rig.ner, rig.nli}, 7);
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(rig.calls[fabrication_prompt(kBobClaim)], 1 + kSupportRetryCap);
}

TEST(Generated, QuestionEntitiesAreNotSwapped) {
  GenerationRig rig;
  rig.use([](const uj::clients::ChatRequest&) { return std::string("x"); });
  std::vector<SynthWarning> warnings;
  const auto out = make_counterfactuals_generated(
      question("q", "Did Alice Smith found the guild?", {kAnswer}), passage("g", kAnswer),
      kAnswer, rig.corpus, {*rig.llm, rig.ner, rig.nli}, 7, &warnings);
  EXPECT_TRUE(out.empty());
  ASSERT_FALSE(warnings.empty());
  EXPECT_NE(warnings[0].message.find("absent from the question"), std::string::npos);
}

TEST(Generated, AllContradictAllEntailGivesTen) {
  uj::clients::GazetteerNer ner({{"Alice Smith", EntityCategory::Person}});
  EntityCorpus corpus;
  for (const char* p : {"Alice Smith", "Bob Jones", "Carl Fox", "Dina Lee", "Emil Roe", "Fay Ng",
                        "Gil Moe", "Hana Ito", "Ivo Kar", "Jun Pae", "Kira Vos", "Lars Um"}) {
    corpus.add(EntityCategory::Person, p);
  }
  for (const char* l : {"Paris", "Lyon", "Oslo", "Lima", "Quito", "Bern", "Riga", "Baku", "Apia", "Suva"}) {
    corpus.add(EntityCategory::Location, l);
  }
  struct AllNli : uj::clients::NliClient {
    uj::clients::NliVerdict nli(std::string_view premise, std::string_view) override {
      return uj::clients::make_verdict(premise.starts_with("EV(")
                                           ? uj::clients::NliLabel::Entailment
                                           : uj::clients::NliLabel::Contradiction);
    }
  } nli;
  uj::clients::FunctionChatClient llm("echo", [](const uj::clients::ChatRequest& r) {
    return "EV(" + r.user_message.substr(r.user_message.rfind("Claim: ") + 7) + ")";
  });
  const auto out = make_counterfactuals_generated(
      question("q", "Who founded the guild?", {kAnswer}), passage("g", kAnswer), kAnswer,
      corpus, {llm, ner, nli}, 11);
  ASSERT_EQ(out.size(), 10u);
  std::set<std::string> claims;
  for (const auto& p : out) {
    claims.insert(p.provenance.claim);
    EXPECT_EQ(p.provenance.support_retries, 0);
  }
  EXPECT_EQ(claims.size(), 10u);
}

uj::corpus::RetrievalRun run_of(const std::string& qid, int depth) {
  uj::corpus::RetrievalRun run;
  for (int r = 1; r <= depth; ++r) run[qid].push_back({"p" + std::to_string(r), r, 100.0 - r});
  return run;
}

PassageStore store_of(int depth, const std::set<int>& with_answer) {
  PassageStore s;
  for (int r = 1; r <= depth; ++r) {
    s.add(passage("p" + std::to_string(r),
                  with_answer.contains(r) ? "It was 1987." : "Filler " + std::to_string(r)));
  }
  return s;
}

std::vector<std::string> ids(const std::vector<Passage>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.id);
  return out;
}

TEST(Gtu, TopNInOrder) {
  const auto q = question("q", "?", {"1987"});
  const auto store = store_of(100, {});
  const auto set = build_gtu(run_of("q", 100), store, q);
  ASSERT_EQ(set.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(set.passages[i].id, "p" + std::to_string(i + 1));
  EXPECT_EQ(set.composition.at(Origin::Retrieved), 10u);
  EXPECT_THROW(build_gtu(run_of("q", 7), store, q), ShortfallError);
}

TEST(Hrnp, TopDownSkippingAnswerPassages) {
  const auto q = question("q", "?", {"1987"});
  const auto h = select_hrnp(run_of("q", 100), q, store_of(100, {1, 2}));
  ASSERT_EQ(h.size(), 10u);
  EXPECT_EQ(h.front().id, "p3");
  EXPECT_EQ(h.back().id, "p12");
  std::set<int> all;
  for (int i = 1; i <= 5; ++i) all.insert(i);
  EXPECT_TRUE(select_hrnp(run_of("q", 5), q, store_of(5, all)).empty());
  EXPECT_EQ(select_hrnp(run_of("q", 5), q, store_of(5, {})).size(), 5u);
}

TEST(Hrnp, RespectsGroundTruthAndSelectionLabels) {
  auto q = question("q", "?", {"1987"}, {"p1"});
  q.is_selected = {{"p2", 1}, {"p3", 0}};
  const auto h = select_hrnp(run_of("q", 20), q, store_of(20, {}), 2);
  EXPECT_EQ(ids(h), (std::vector<std::string>{"p3", "p4"}));
}

TEST(Wrnp, BottomUpWithExclusions) {
  const auto q = question("q", "?", {"1987"});
  const auto store = store_of(100, {});
  const auto w = select_wrnp(run_of("q", 100), q, store, {});
  ASSERT_EQ(w.size(), 10u);
  EXPECT_EQ(w.front().id, "p100");
  EXPECT_EQ(w.back().id, "p91");
  std::set<std::string> exclude;
  for (int r = 91; r <= 100; ++r) exclude.insert("p" + std::to_string(r));
  EXPECT_EQ(select_wrnp(run_of("q", 100), q, store, exclude).front().id, "p90");
  std::set<int> answers;
  for (int r = 1; r <= 100; ++r) {
    if (r != 50) answers.insert(r);
  }
  EXPECT_EQ(ids(select_wrnp(run_of("q", 100), q, store_of(100, answers), {})),
            std::vector<std::string>{"p50"});
}

TEST(Wrnp, DisjointFromHrnpAndGold) {
  const auto q = question("q", "?", {"1987"}, {"p4"});
  const auto run = run_of("q", 30);
  const auto store = store_of(30, {2, 9});
  const auto h = select_hrnp(run, q, store);
  std::set<std::string> exclude{"p4"};
  for (const auto& p : h) exclude.insert(p.id);
  const auto w = select_wrnp(run, q, store, exclude);
  for (const auto& p : w) {
    EXPECT_FALSE(exclude.contains(p.id));
    EXPECT_FALSE(uj::corpus::contains_answer(p, q.gold_answers));
  }
  for (const auto& p : h) EXPECT_FALSE(uj::corpus::contains_answer(p, q.gold_answers));
}

std::vector<Passage> pool(const std::string& prefix, std::size_t n, Origin origin) {
  std::vector<Passage> out;
  for (std::size_t i = 0; i < n; ++i) {
    Passage p = passage(prefix + std::to_string(i), prefix + " text " + std::to_string(i));
    p.origin = origin;
    if (origin == Origin::Counterfactual) {
      p.provenance = {"g", "a", "b" + std::to_string(i), "CorpusSubstitution", "", "", 0};
    }
    out.push_back(p);
  }
  return out;
}

TEST(Assemble, OneGoldGivesThreeThreeThree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = assemble_candidates("q", pool("g", 1, Origin::GroundTruth),
                                         pool("c", 10, Origin::Counterfactual),
                                         pool("h", 10, Origin::HRNP), pool("w", 10, Origin::WRNP),
                                         seed);
    EXPECT_EQ(set.composition, (std::map<Origin, std::size_t>{{Origin::GroundTruth, 1},
                                                              {Origin::Counterfactual, 3},
                                                              {Origin::HRNP, 3},
                                                              {Origin::WRNP, 3}}));
  }
}

TEST(Assemble, TwoGoldCountsInRange) {
  std::set<std::map<Origin, std::size_t>> seen;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto set = assemble_candidates("q", pool("g", 2, Origin::GroundTruth),
                                         pool("c", 10, Origin::Counterfactual),
                                         pool("h", 10, Origin::HRNP), pool("w", 10, Origin::WRNP),
                                         seed);
    EXPECT_EQ(set.size(), 10u);
    EXPECT_EQ(set.composition.at(Origin::GroundTruth), 2u);
    for (Origin o : {Origin::Counterfactual, Origin::HRNP, Origin::WRNP}) {
      EXPECT_GE(set.composition.at(o), 2u);
      EXPECT_LE(set.composition.at(o), 4u);
    }
    seen.insert(set.composition);
  }
  EXPECT_GT(seen.size(), 1u);
}

TEST(Assemble, HrnpAndWrnpTakenFromPoolTop) {
  const auto set = assemble_candidates("q", pool("g", 1, Origin::GroundTruth),
                                       pool("c", 10, Origin::Counterfactual),
                                       pool("h", 10, Origin::HRNP), pool("w", 10, Origin::WRNP), 4);
  std::set<std::string> got;
  for (const auto& p : set.passages) got.insert(p.id);
  for (const char* id : {"h0", "h1", "h2", "w0", "w1", "w2", "g0"}) EXPECT_TRUE(got.contains(id)) << id;
}

TEST(Assemble, DeterministicAndShuffled) {
  auto make = [](std::uint64_t seed) {
    return assemble_candidates("q", pool("g", 1, Origin::GroundTruth),
                               pool("c", 10, Origin::Counterfactual), pool("h", 10, Origin::HRNP),
                               pool("w", 10, Origin::WRNP), seed);
  };
  EXPECT_EQ(make(3).passages, make(3).passages);
  std::set<std::size_t> gold_positions;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = make(seed);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.passages[i].origin == Origin::GroundTruth) gold_positions.insert(i);
    }
  }
  EXPECT_GT(gold_positions.size(), 3u);
}

TEST(Assemble, FixedPositionPlacesGold) {
  for (std::size_t p = 0; p < 10; ++p) {
    AssemblyOptions o;
    o.ordering = Ordering::FixedPosition;
    o.ground_truth_position = p;
    const auto set = assemble_candidates("q", pool("g", 1, Origin::GroundTruth),
                                         pool("c", 10, Origin::Counterfactual),
                                         pool("h", 10, Origin::HRNP), pool("w", 10, Origin::WRNP),
                                         1, o);
    EXPECT_EQ(set.passages[p].origin, Origin::GroundTruth);
  }
}

TEST(Assemble, BackfillsShortPools) {
  const auto set = assemble_candidates("q", pool("g", 1, Origin::GroundTruth),
                                       pool("c", 1, Origin::Counterfactual),
                                       pool("h", 10, Origin::HRNP), pool("w", 10, Origin::WRNP), 2);
  EXPECT_EQ(set.size(), 10u);
  EXPECT_EQ(set.composition.at(Origin::Counterfactual), 1u);
  EXPECT_EQ(set.composition.at(Origin::HRNP), 5u);
  EXPECT_EQ(set.composition.at(Origin::WRNP), 3u);
  EXPECT_THROW(assemble_candidates("q", pool("g", 1, Origin::GroundTruth),
                                   pool("c", 1, Origin::Counterfactual),
                                   pool("h", 2, Origin::HRNP), pool("w", 2, Origin::WRNP), 2),
               AssemblyError);
  EXPECT_THROW(assemble_candidates("q", pool("g", 10, Origin::GroundTruth), {}, {}, {}, 2),
               uj::ContractError);
}

}  // namespace
