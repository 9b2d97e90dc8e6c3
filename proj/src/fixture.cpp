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

#include "uj/fixture.hpp"

#include <array>
#include <set>

#include "json.hpp"
#include "uj/records.hpp"

namespace uj::fixture {

using clients::EntityCategory;
using corpus::Passage;
using corpus::Question;

namespace {

constexpr std::array<std::string_view, 16> kSyllables = {
    "ka", "ri", "vo", "de", "mu", "te", "lo", "sa",
    "ne", "pi", "go", "zu", "fe", "hi", "ba", "ru"};

constexpr std::array<std::string_view, 12> kNumberWords = {
    "three", "four", "five", "six", "eight", "nine",
    "eleven", "twelve", "twenty", "thirty", "forty", "fifty"};

struct Topic {
  EntityCategory category;
  std::string_view noun;
  std::string_view question;
  std::array<std::string_view, 2> gold;  // {T} topic, {A} answer
  std::string_view sentence_answer;      // NFQA gold
};

constexpr std::array<Topic, 5> kTopics = {{
    {EntityCategory::Person, "guild", "Who founded the {T} guild?",
     {"The {T} guild was founded by {A} after a long dispute over trading "
      "rights in the harbor district.",
      "Records kept by the {T} guild name {A} as its founder and first "
      "treasurer."},
     "The {T} guild was founded by {A}."},
    {EntityCategory::Date, "bridge", "In what year did the {T} bridge open?",
     {"The {T} bridge opened to traffic in {A}, two years after construction "
      "began.",
      "Local archives show that the {T} bridge was first crossed by carts in "
      "{A}."},
     "The {T} bridge opened in {A}."},
    {EntityCategory::Location, "museum", "In which city is the {T} museum located?",
     {"The {T} museum is located in {A} and holds a large collection of old "
      "maps.",
      "Visitors to {A} often stop at the {T} museum near the river."},
     "The {T} museum is located in {A}."},
    {EntityCategory::Organization, "railway", "Which company built the {T} railway?",
     {"The {T} railway was built by {A} using steel brought in by ship.",
      "Engineers from {A} laid most of the track of the {T} railway."},
     "The {T} railway was built by {A}."},
    {EntityCategory::Numeric, "castle", "How many towers does the {T} castle have?",
     {"The {T} castle has {A} towers arranged around a central courtyard.",
      "Guides at the {T} castle point out all {A} of its towers."},
     "The {T} castle has {A} towers."},
}};

constexpr std::array<std::string_view, 10> kTopical = {
    "The {T} {N} is often mentioned in travel guides of the region.",
    "A festival is held every summer near the {T} {N}.",
    "Photographs of the {T} {N} were shown at a local exhibition.",
    "The {T} {N} was repaired after a severe winter storm.",
    "Historians still debate the early records of the {T} {N}.",
    "School groups regularly visit the {T} {N} in the autumn.",
    "The {T} {N} appears in several folk songs from the valley.",
    "A small cafe now stands beside the {T} {N}.",
    "Maps from the last century label the {T} {N} in bold letters.",
    "The {T} {N} has a visitor book signed by many travellers."};

constexpr std::array<std::string_view, 3> kTopicalTails = {
    "", " Many residents consider it a local landmark.",
    " Its history is told on a plaque by the entrance."};

constexpr std::array<std::string_view, 6> kUnrelated = {
    "Rainfall in the {U} valley was measured by volunteers during the spring.",
    "The {U} orchard produces apples that are sold at the Saturday market.",
    "A new footpath connects the {U} meadows with the old mill.",
    "Fishermen on the {U} lake report that the water was unusually calm.",
    "The {U} choir rehearses on Tuesday evenings in the parish hall.",
    "Wild goats have been seen grazing on the slopes above {U}."};

std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i);
      out += vars.at(std::string(tmpl.substr(i + 1, close - i - 1)));
      i = close;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

class Words {
 public:
  explicit Words(Rng& rng) : rng_(rng) {}

  std::string next() {
    for (int misses = 0;; ++misses) {
      if (misses == 64) {
        ++length_;
        misses = 0;
      }
      std::string w;
      for (int i = 0; i < length_; ++i) w += kSyllables[rng_.uniform_index(kSyllables.size())];
      if (!used_.insert(w).second) continue;
      w[0] = static_cast<char>(w[0] - 'a' + 'A');
      return w;
    }
  }

 private:
  Rng& rng_;
  int length_ = 3;
  std::set<std::string> used_;
};

}  // namespace

corpus::PassageStore Fixture::store() const {
  corpus::PassageStore s;
  for (const auto& p : passages) s.add(p);
  return s;
}

Fixture make_fixture(const FixtureOptions& options) {
  if (options.gold_per_question < 1 || options.gold_per_question > 2) {
    throw ContractError("fixture: gold_per_question must be 1 or 2");
  }
  if (options.run_depth < 30) throw ContractError("fixture: run_depth must be >= 30");
  Rng rng(options.seed);
  Words words(rng);
  std::set<std::string> used_years;
  Fixture f;

  for (std::size_t qi = 0; qi < options.questions; ++qi) {
    const Topic& topic = kTopics[qi % kTopics.size()];
    std::string answer;
    switch (topic.category) {
      case EntityCategory::Person: answer = words.next() + " " + words.next(); break;
      case EntityCategory::Date:
        do {
          answer = std::to_string(1600 + rng.uniform_index(300));
        } while (!used_years.insert(answer).second && used_years.size() < 300);
        break;
      case EntityCategory::Location: answer = words.next(); break;
      case EntityCategory::Organization: answer = words.next() + " Works"; break;
      default: answer = std::string(kNumberWords[rng.uniform_index(kNumberWords.size())]);
    }
    f.gazetteer[answer] = topic.category;

    char id_buf[16];
    std::snprintf(id_buf, sizeof id_buf, "q%03zu", qi + 1);
    const std::string qid = id_buf;
    const std::map<std::string, std::string> vars = {
        {"T", words.next()}, {"A", answer}, {"N", std::string(topic.noun)}};

    Question q;
    q.id = qid;
    q.text = fill(topic.question, vars);
    q.dataset_kind = options.kind;
    q.gold_answers = {options.kind == corpus::DatasetKind::FQA
                          ? answer
                          : fill(topic.sentence_answer, vars)};

    std::vector<Passage> gold;
    for (std::size_t g = 0; g < options.gold_per_question; ++g) {
      Passage p;
      p.id = qid + "-g" + std::to_string(g + 1);
      p.text = fill(topic.gold[g], vars);
      gold.push_back(p);
      q.ground_truth_evidence_ids.push_back(p.id);
    }
    Passage mention{qid + "-x",
                    "A later report mentions " + answer + " in an unrelated context.",
                    corpus::Origin::Retrieved, {}};

    // Ranks 1..20 hold gold, the mention and topical passages; below that
    // unrelated passages.
    std::vector<std::optional<Passage>> top(20);
    const bool high = rng.uniform01() < options.gold_in_top10;
    for (const auto& g : gold) {
      std::size_t slot;
      do {
        slot = high ? rng.uniform_index(10) : 10 + rng.uniform_index(10);
      } while (top[slot]);
      top[slot] = g;
    }
    std::size_t slot;
    do {
      slot = 10 + rng.uniform_index(10);
    } while (top[slot]);
    top[slot] = mention;
    std::size_t t = 0;
    for (auto& s : top) {
      if (s) continue;
      const std::string text = fill(kTopical[t % kTopical.size()], vars) +
                               std::string(kTopicalTails[t / kTopical.size()]);
      s = Passage{qid + "-t" + std::to_string(t + 1), text, corpus::Origin::Retrieved, {}};
      ++t;
    }
    std::vector<Passage> ranked;
    for (auto& s : top) ranked.push_back(*s);
    for (std::size_t u = 0; ranked.size() < options.run_depth; ++u) {
      ranked.push_back(Passage{qid + "-u" + std::to_string(u + 1),
                               fill(kUnrelated[u % kUnrelated.size()], {{"U", words.next()}}),
                               corpus::Origin::Retrieved,
                               {}});
    }
    auto& entries = f.run[qid];
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      entries.push_back({ranked[r].id, static_cast<int>(r + 1),
                         100.0 - 0.5 * static_cast<double>(r)});
      f.passages.push_back(ranked[r]);
    }
    f.questions.push_back(std::move(q));
  }
  return f;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir,
                   corpus::DatasetKind kind, std::uint64_t seed) {
  using json = records::json;
  std::string qs;
  for (const auto& q : fixture.questions) {
    qs += json{{"id", q.id},
               {"question", q.text},
               {"answers", q.gold_answers},
               {"ground_truth_ids", q.ground_truth_evidence_ids}}
              .dump() +
          "\n";
  }
  std::string ps;
  for (const auto& p : fixture.passages) ps += json{{"id", p.id}, {"text", p.text}}.dump() + "\n";
  json gaz = json::object();
  for (const auto& [s, c] : fixture.gazetteer) gaz[s] = clients::to_string(c);
  json config{{"questions", "questions.jsonl"},
              {"passages", "passages.jsonl"},
              {"run", "run.trec"},
              {"gazetteer_file", "gazetteer.json"},
              {"dataset_kind", corpus::to_string(kind)},
              {"mode", "GTI"},
              {"seed", seed},
              {"backend", "mock:oracle"},
              {"out", "out"}};
  records::write_text(dir / "questions.jsonl", qs);
  records::write_text(dir / "passages.jsonl", ps);
  records::write_text(dir / "run.trec", corpus::serialize_run(fixture.run, "fixture"));
  records::write_text(dir / "gazetteer.json", gaz.dump(2) + "\n");
  records::write_text(dir / "config.json", config.dump(2) + "\n");
}

}  // namespace uj::fixture
