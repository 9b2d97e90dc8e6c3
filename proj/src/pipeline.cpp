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

#include "uj/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "uj/metrics.hpp"
#include "uj/synth.hpp"

namespace uj::pipeline {

using json = nlohmann::json;
using records::Meta;

std::string_view to_string(Benchmark b) { return b == Benchmark::GTI ? "GTI" : "GTU"; }

Benchmark parse_benchmark(std::string_view s) {
  if (s == "GTI" || s == "gti") return Benchmark::GTI;
  if (s == "GTU" || s == "gtu") return Benchmark::GTU;
  throw ContractError("unknown benchmark mode: " + std::string(s));
}

std::vector<judge::JudgeConfig> RunConfig::default_grid() {
  using judge::Form;
  using judge::Judgment;
  std::vector<judge::JudgeConfig> grid;
  auto add = [&](Form f, Judgment j, int k) {
    judge::JudgeConfig c;
    c.form = f;
    c.judgment = j;
    c.k_samples = k;
    grid.push_back(c);
  };
  add(Form::Pointwise, Judgment::Utility, 1);
  add(Form::Pairwise, Judgment::Utility, 1);
  add(Form::ListwiseSet, Judgment::Utility, 1);
  add(Form::ListwiseRank, Judgment::Utility, 1);
  add(Form::ListwiseSet, Judgment::Relevance, 1);
  add(Form::ListwiseRank, Judgment::Relevance, 1);
  add(Form::ListwiseSet, Judgment::Utility, 5);
  add(Form::ListwiseSet, Judgment::Utility, 10);
  return grid;
}

// ---- configuration ----

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::chrono::seconds seconds_of(const json& j) {
  return std::chrono::seconds(j.get<long>());
}

void expect_keys(const json& obj, std::initializer_list<std::string_view> keys,
                 std::string_view where) {
  for (const auto& [k, v] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ContractError("config: unknown key \"" + k + "\" in " + std::string(where));
    }
  }
}

}  // namespace

void apply_json(RunConfig& c, const json& doc, const fs::path& base) {
  if (!doc.is_object()) throw ContractError("config: top level must be an object");
  expect_keys(doc,
              {"questions", "passages", "run", "out", "dataset_kind", "mode",
               "candidates", "ground_truth_position", "grid", "sources", "backend",
               "http", "script", "noise", "sidecar_backend", "sidecar", "gazetteer",
               "gazetteer_file", "seed", "parallelism"},
              "config");
  try {
    if (doc.contains("questions")) c.questions = resolve(base, doc["questions"]);
    if (doc.contains("passages")) c.passages = resolve(base, doc["passages"]);
    if (doc.contains("run")) c.run = resolve(base, doc["run"]);
    if (doc.contains("out")) c.out = resolve(base, doc["out"]);
    if (doc.contains("dataset_kind")) {
      c.dataset_kind = corpus::parse_dataset_kind(doc["dataset_kind"].get<std::string>());
    }
    if (doc.contains("mode")) c.benchmark = parse_benchmark(doc["mode"].get<std::string>());
    if (doc.contains("candidates")) c.candidates = doc["candidates"].get<std::size_t>();
    if (doc.contains("ground_truth_position")) {
      const auto& v = doc["ground_truth_position"];
      if (v.is_null()) {
        c.ground_truth_position.reset();
      } else {
        c.ground_truth_position = v.get<std::size_t>();
      }
    }
    if (doc.contains("grid")) {
      c.grid.clear();
      for (const auto& g : doc["grid"]) {
        c.grid.push_back(records::decode_judge_config(records::json::parse(g.dump())));
      }
    }
    if (doc.contains("sources")) c.sources = doc["sources"].get<std::vector<std::string>>();
    if (doc.contains("backend")) c.backend = doc["backend"].get<std::string>();
    if (doc.contains("http")) {
      const auto& h = doc["http"];
      expect_keys(h, {"endpoint", "model", "api_key_env", "timeout_seconds", "max_attempts"},
                  "http");
      c.http.endpoint = h.value("endpoint", c.http.endpoint);
      c.http.model_name = h.value("model", c.http.model_name);
      c.http.api_key_env = h.value("api_key_env", c.http.api_key_env);
      if (h.contains("timeout_seconds")) c.http.timeout = seconds_of(h["timeout_seconds"]);
      c.http.retry.max_attempts = h.value("max_attempts", c.http.retry.max_attempts);
    }
    if (doc.contains("script")) c.script = resolve(base, doc["script"]);
    if (doc.contains("noise")) {
      const auto& n = doc["noise"];
      expect_keys(n, {"miss_base", "miss_slope", "false_positive"}, "noise");
      c.noise.miss_base = n.value("miss_base", c.noise.miss_base);
      c.noise.miss_slope = n.value("miss_slope", c.noise.miss_slope);
      c.noise.false_positive = n.value("false_positive", c.noise.false_positive);
    }
    if (doc.contains("sidecar_backend")) {
      c.sidecar_backend = doc["sidecar_backend"].get<std::string>();
    }
    if (doc.contains("sidecar")) {
      const auto& s = doc["sidecar"];
      expect_keys(s, {"endpoint", "timeout_seconds"}, "sidecar");
      c.sidecar.endpoint = s.value("endpoint", c.sidecar.endpoint);
      if (s.contains("timeout_seconds")) c.sidecar.timeout = seconds_of(s["timeout_seconds"]);
    }
    auto add_gazetteer = [&](const json& g) {
      for (const auto& [surface, cat] : g.items()) {
        c.gazetteer[surface] = clients::parse_entity_category(cat.get<std::string>());
      }
    };
    if (doc.contains("gazetteer_file")) {
      const fs::path p = resolve(base, doc["gazetteer_file"]);
      try {
        add_gazetteer(json::parse(corpus::read_file(p)));
      } catch (const json::exception& e) {
        throw ContractError("config: bad gazetteer file " + p.string() + ": " + e.what());
      }
    }
    if (doc.contains("gazetteer")) add_gazetteer(doc["gazetteer"]);
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("parallelism")) c.parallelism = doc["parallelism"].get<int>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("config: ") + e.what());
  }
  if (c.parallelism < 1) throw ContractError("config: parallelism must be >= 1");
  if (c.candidates < 1) throw ContractError("config: candidates must be >= 1");
}

RunConfig load_config(const fs::path& path) {
  RunConfig c;
  json doc;
  try {
    doc = json::parse(corpus::read_file(path));
  } catch (const json::exception& e) {
    throw ContractError("config " + path.string() + ": " + e.what());
  }
  apply_json(c, doc, path.parent_path());
  return c;
}

void resolve_grid_seeds(RunConfig& config) {
  for (auto& g : config.grid) {
    if (g.seed == 0) g.seed = config.seed;
  }
}

json canonical(const RunConfig& config) {
  RunConfig c = config;
  resolve_grid_seeds(c);
  json grid = json::array();
  for (const auto& g : c.grid) grid.push_back(json::parse(records::encode(g).dump()));
  json gaz = json::object();
  for (const auto& [s, cat] : c.gazetteer) gaz[s] = clients::to_string(cat);
  json j{{"questions", c.questions.generic_string()},
         {"passages", c.passages.generic_string()},
         {"run", c.run.generic_string()},
         {"dataset_kind", corpus::to_string(c.dataset_kind)},
         {"mode", to_string(c.benchmark)},
         {"candidates", c.candidates},
         {"grid", grid},
         {"sources", c.sources},
         {"backend", c.backend},
         {"script", c.script.generic_string()},
         {"noise",
          {{"miss_base", c.noise.miss_base},
           {"miss_slope", c.noise.miss_slope},
           {"false_positive", c.noise.false_positive}}},
         {"sidecar_backend", c.sidecar_backend},
         {"gazetteer", gaz},
         {"seed", c.seed}};
  if (c.ground_truth_position) j["ground_truth_position"] = *c.ground_truth_position;
  if (c.backend == "http") {
    j["http"] = {{"endpoint", c.http.endpoint}, {"model", c.http.model_name}};
  }
  if (c.sidecar_backend == "http") j["sidecar"] = c.sidecar.endpoint;
  return j;
}

std::string config_hash(const RunConfig& config) {
  return sha256_hex(canonical(config).dump()).substr(0, 16);
}

Meta meta_for(const RunConfig& config) {
  Meta m;
  m.seed = config.seed;
  m.config_hash = config_hash(config);
  return m;
}

// ---- tables ----

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string Table::to_text() const {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], r[i].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string cell = i < cells.size() ? cells[i] : "";
      const std::size_t pad = width[i] - cell.size();
      // First column left-aligned, numbers right-aligned.
      if (i == 0) {
        out += cell + std::string(pad, ' ');
      } else {
        out += "  " + std::string(pad, ' ') + cell;
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w + 2;
  out += std::string(total > 2 ? total - 2 : 0, '-') + "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string Table::to_csv() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_cell(cells[i]);
    }
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

// ---- shared loading ----

namespace {

struct Inputs {
  std::vector<corpus::Question> questions;
  std::map<std::string, const corpus::Question*> by_id;
  corpus::PassageStore store;
  std::optional<corpus::RetrievalRun> run;
};

Inputs load_inputs(const RunConfig& c, bool need_run) {
  if (c.questions.empty()) throw ContractError("config: questions path not set");
  if (c.passages.empty()) throw ContractError("config: passages path not set");
  Inputs in;
  in.questions = corpus::load_questions(c.questions, c.dataset_kind);
  in.store = corpus::load_passages(c.passages);
  if (!c.run.empty()) {
    in.run = corpus::load_run(c.run);
  } else if (need_run) {
    throw ContractError("config: run file not set");
  }
  for (const auto& q : in.questions) in.by_id[q.id] = &q;
  return in;
}

std::vector<corpus::CandidateSet> load_candidates(const RunConfig& c) {
  const auto file = records::read_jsonl(c.out / "candidates.jsonl");
  std::vector<corpus::CandidateSet> sets;
  for (const auto& row : file.rows) sets.push_back(records::decode_candidate_set(row));
  return sets;
}

std::shared_ptr<mock::OracleKnowledge> build_knowledge(
    const Inputs& in, const std::vector<corpus::CandidateSet>& sets) {
  auto k = std::make_shared<mock::OracleKnowledge>();
  for (const auto& q : in.questions) {
    k->add_question_context(q, in.store, in.run ? &*in.run : nullptr);
  }
  for (const auto& s : sets) {
    auto it = in.by_id.find(s.question_id);
    if (it != in.by_id.end()) k->add_candidates(*it->second, s);
  }
  return k;
}

fs::path judgment_path(const RunConfig& c, const judge::JudgeConfig& g) {
  return c.out / "judgments" / (judge::label(g) + ".jsonl");
}

fs::path answer_path(const RunConfig& c, const std::string& label) {
  return c.out / "answers" / (label + ".jsonl");
}

void write_report(const RunConfig& c, const std::string& stem, const std::string& title,
                  const Table& table, std::string& report) {
  const Meta meta = meta_for(c);
  const std::string text = title + "\n" + records::csv_meta_line(meta).substr(2) +
                           "\n\n" + table.to_text();
  records::write_text(c.out / (stem + ".txt"), text);
  records::write_text(c.out / (stem + ".csv"),
                      records::csv_meta_line(meta) + "\n" + table.to_csv());
  report += text;
}

}  // namespace

std::unique_ptr<clients::ChatClient> make_chat_client(
    const RunConfig& c, std::shared_ptr<const mock::OracleKnowledge> knowledge) {
  if (c.backend == "http") {
    clients::HttpChatConfig h = c.http;
    h.parallelism = c.parallelism;
    if (h.endpoint.empty()) throw clients::ConfigurationError("http backend: endpoint not set");
    if (h.model_name.empty()) throw clients::ConfigurationError("http backend: model not set");
    return std::make_unique<clients::HttpChatClient>(std::move(h));
  }
  if (c.backend == "mock:oracle") {
    return mock::make_oracle_client(std::move(knowledge), c.parallelism);
  }
  if (c.backend == "mock:noisy") {
    mock::NoiseModel noise = c.noise;
    noise.seed = derive_seed(c.seed, "noise");
    return mock::make_noisy_client(std::move(knowledge), noise, c.parallelism);
  }
  if (c.backend == "mock:scripted") {
    if (c.script.empty()) {
      throw clients::ConfigurationError("mock:scripted backend: script file not set");
    }
    auto client = std::make_unique<clients::ScriptedChatClient>(true);
    client->load_script(corpus::read_file(c.script));
    return client;
  }
  throw clients::ConfigurationError("unknown backend '" + c.backend + "'");
}

// ---- build ----

CommandResult run_build(const RunConfig& c) {
  CommandResult result;
  const Inputs in = load_inputs(c, true);
  const Meta meta = meta_for(c);

  std::vector<corpus::CandidateSet> sets;
  if (c.benchmark == Benchmark::GTU) {
    for (const auto& q : in.questions) {
      try {
        auto set = synth::build_gtu(*in.run, in.store, q, c.candidates);
        set.seed = synth::question_seed(c.seed, q.id);
        sets.push_back(std::move(set));
      } catch (const Error& e) {
        result.errors.push_back(q.id + ": " + e.what());
      }
    }
  } else {
    std::unique_ptr<clients::NerClient> ner;
    std::unique_ptr<clients::NliClient> nli;
    if (c.sidecar_backend == "http") {
      if (c.sidecar.endpoint.empty()) {
        throw clients::ConfigurationError("sidecar backend: endpoint not set");
      }
      ner = std::make_unique<clients::HttpNerClient>(c.sidecar);
      nli = std::make_unique<clients::HttpNliClient>(c.sidecar);
    } else if (c.sidecar_backend == "mock") {
      ner = std::make_unique<clients::GazetteerNer>(c.gazetteer);
      auto table = std::make_unique<clients::TableNli>();
      table->set_default(clients::NliLabel::Contradiction);
      table->set_containment_entails(true);
      nli = std::move(table);
    } else {
      throw clients::ConfigurationError("unknown sidecar backend '" + c.sidecar_backend + "'");
    }
    std::unique_ptr<clients::ChatClient> llm;
    if (c.dataset_kind == corpus::DatasetKind::NFQA) {
      llm = make_chat_client(c, build_knowledge(in, {}));
    }
    const synth::EntityCorpus entities = synth::build_entity_corpus(in.questions, *ner);
    if (entities.skipped_other > 0) {
      result.warnings.push_back(std::to_string(entities.skipped_other) +
                                " answers without a usable entity category skipped "
                                "from the entity corpus");
    }
    synth::GtiInputs gi{*in.run, in.store, entities, llm.get(), ner.get(), nli.get()};
    synth::AssemblyOptions options;
    options.n = c.candidates;
    if (c.ground_truth_position) {
      options.ordering = synth::Ordering::FixedPosition;
      options.ground_truth_position = *c.ground_truth_position;
    }
    for (const auto& q : in.questions) {
      std::vector<synth::SynthWarning> warnings;
      try {
        sets.push_back(synth::build_gti(q, gi, synth::question_seed(c.seed, q.id),
                                        options, &warnings));
      } catch (const Error& e) {
        result.errors.push_back(q.id + ": " + e.what());
      }
      for (const auto& w : warnings) result.warnings.push_back(w.question_id + ": " + w.message);
    }
  }

  std::vector<records::json> rows;
  for (const auto& s : sets) rows.push_back(records::encode(s));
  records::write_jsonl(c.out / "candidates.jsonl", meta, rows);

  Table table;
  const double nq = static_cast<double>(sets.size());
  auto mean = [&](auto count_of) {
    if (sets.empty()) return std::string("-");
    double total = 0;
    for (const auto& s : sets) total += static_cast<double>(count_of(s));
    return fixed2(total / nq);
  };
  auto origin_count = [](corpus::Origin o) {
    return [o](const corpus::CandidateSet& s) {
      auto it = s.composition.find(o);
      return it == s.composition.end() ? std::size_t{0} : it->second;
    };
  };
  if (c.benchmark == Benchmark::GTI) {
    table.header = {"Benchmark", "#Queries", "GT", "CP", "HRNP", "WRNP"};
    table.rows.push_back({std::string(to_string(c.benchmark)) + " " +
                              std::string(corpus::to_string(c.dataset_kind)),
                          std::to_string(sets.size()),
                          mean(origin_count(corpus::Origin::GroundTruth)),
                          mean(origin_count(corpus::Origin::Counterfactual)),
                          mean(origin_count(corpus::Origin::HRNP)),
                          mean(origin_count(corpus::Origin::WRNP))});
  } else {
    table.header = {"Benchmark", "#Queries", "Retrieved", "Gold in set"};
    table.rows.push_back(
        {std::string(to_string(c.benchmark)) + " " +
             std::string(corpus::to_string(c.dataset_kind)),
         std::to_string(sets.size()), mean(origin_count(corpus::Origin::Retrieved)),
         mean([&](const corpus::CandidateSet& s) {
           auto it = in.by_id.find(s.question_id);
           return it == in.by_id.end() ? std::size_t{0}
                                       : s.ground_truth_indices(*it->second).size();
         })});
  }
  write_report(c, "build_summary", "Candidate-set composition (mean passages per query)",
               table, result.report);
  if (!result.errors.empty()) result.exit_code = 1;
  return result;
}

// ---- judge ----

namespace {

struct ConfigScores {
  std::size_t scored = 0;
  std::size_t unscored = 0;
  double p = 0, r = 0, f1 = 0;
  double ndcg1 = 0, ndcg5 = 0, mrr5 = 0;
  int parse_failures = 0;
  int calls = 0;
};

Table judge_table(const RunConfig& c, const std::vector<judge::JudgeConfig>& grid,
                  const std::map<std::string, std::vector<judge::JudgmentRecord>>& by_label,
                  const Inputs& in, const std::vector<corpus::CandidateSet>& sets) {
  std::map<std::string, const corpus::CandidateSet*> set_of;
  for (const auto& s : sets) set_of[s.question_id] = &s;
  Table t;
  t.header = {"Config",  "#Q",     "P",     "R",     "F1",
              "NDCG@1",  "NDCG@5", "MRR@5", "Calls", "Parse failures"};
  for (const auto& g : grid) {
    const std::string label = judge::label(g);
    auto it = by_label.find(label);
    if (it == by_label.end()) continue;
    ConfigScores sc;
    for (const auto& rec : it->second) {
      sc.parse_failures += rec.parse_failures;
      sc.calls += rec.call_count;
      auto q = in.by_id.find(rec.question_id);
      auto s = set_of.find(rec.question_id);
      if (q == in.by_id.end() || s == set_of.end()) {
        ++sc.unscored;
        continue;
      }
      const auto gt = s->second->ground_truth_indices(*q->second);
      if (gt.empty()) {
        ++sc.unscored;
        continue;
      }
      const std::set<std::size_t> truth(gt.begin(), gt.end());
      ++sc.scored;
      if (rec.result_kind == judge::ResultKind::SelectedSet) {
        const std::set<std::size_t> sel(rec.selected.begin(), rec.selected.end());
        const auto m = metrics::set_metrics(sel, truth);
        sc.p += m.precision;
        sc.r += m.recall;
        sc.f1 += m.f1;
      } else {
        sc.ndcg1 += metrics::ndcg_at_k(rec.ranking, truth, 1);
        sc.ndcg5 += metrics::ndcg_at_k(rec.ranking, truth, 5);
        sc.mrr5 += metrics::mrr_at_k(rec.ranking, truth, 5);
      }
    }
    const bool set_form = g.form == judge::Form::ListwiseSet || g.form == judge::Form::Pointwise;
    auto cell = [&](double total, bool applies) {
      if (!applies || sc.scored == 0) return std::string("-");
      return fixed2(100.0 * total / static_cast<double>(sc.scored));
    };
    t.rows.push_back({label, std::to_string(sc.scored), cell(sc.p, set_form),
                      cell(sc.r, set_form), cell(sc.f1, set_form), cell(sc.ndcg1, !set_form),
                      cell(sc.ndcg5, !set_form), cell(sc.mrr5, !set_form),
                      std::to_string(sc.calls), std::to_string(sc.parse_failures)});
  }
  (void)c;
  return t;
}

std::vector<judge::JudgmentRecord> read_judgments(const fs::path& path) {
  std::vector<judge::JudgmentRecord> out;
  for (const auto& row : records::read_jsonl(path).rows) {
    out.push_back(records::decode_judgment(row));
  }
  return out;
}

}  // namespace

CommandResult run_judge(const RunConfig& config) {
  RunConfig c = config;
  resolve_grid_seeds(c);
  CommandResult result;
  if (c.grid.empty()) {
    result.warnings.push_back("empty judge grid; nothing to do");
    return result;
  }
  for (const auto& g : c.grid) {
    judge::validate(g);
    if (judge::is_flagged(g)) {
      result.warnings.push_back(judge::label(g) +
                                ": pairwise with the answer requirement is outside "
                                "the reference grid; results are not comparable");
    }
  }
  const Inputs in = load_inputs(c, false);
  const auto sets = load_candidates(c);
  auto client = make_chat_client(c, build_knowledge(in, sets));
  const Meta meta = meta_for(c);

  std::map<std::string, std::vector<judge::JudgmentRecord>> by_label;
  for (const auto& g : c.grid) {
    const std::string label = judge::label(g);
    if (by_label.count(label) != 0) {
      result.warnings.push_back(label + ": duplicate grid entry skipped");
      continue;
    }
    auto& recs = by_label[label];
    for (const auto& s : sets) {
      auto q = in.by_id.find(s.question_id);
      if (q == in.by_id.end()) {
        result.errors.push_back(label + "/" + s.question_id + ": unknown question");
        continue;
      }
      try {
        recs.push_back(judge::judge(*q->second, s, *client, g));
        if (recs.back().parse_failures > 0) {
          result.warnings.push_back(label + "/" + s.question_id + ": " +
                                    std::to_string(recs.back().parse_failures) +
                                    " unparseable output(s)");
        }
      } catch (const Error& e) {
        result.errors.push_back(label + "/" + s.question_id + ": " + e.what());
      }
    }
    std::vector<records::json> rows;
    for (const auto& r : recs) rows.push_back(records::encode(r));
    records::write_jsonl(judgment_path(c, g), meta, rows);
  }
  records::write_text(c.out / "judge_requests.jsonl", client->log().to_jsonl());
  write_report(c, "judge_metrics", "Judgment quality against ground truth",
               judge_table(c, c.grid, by_label, in, sets), result.report);
  if (!result.errors.empty()) result.exit_code = 1;
  return result;
}

// ---- qa ----

std::string row_name(const qa::EvidenceSource& source) {
  switch (source.kind) {
    case qa::EvidenceKind::None: return "None";
    case qa::EvidenceKind::Dense: return "Dense";
    case qa::EvidenceKind::GroundTruth: return "Ground-truth";
    default: break;
  }
  const auto& g = *source.judge_config;
  if (g.k_samples > 1) return std::to_string(g.k_samples) + "-sampling";
  std::string name = source.kind == qa::EvidenceKind::UtilityJudged ? "Utility" : "Relevance";
  std::string form(judge::to_string(g.form));
  std::replace(form.begin(), form.end(), '_', '-');
  name += " (" + form;
  if (g.requirement != judge::Requirement::None) {
    name += ", " + std::string(judge::to_string(g.requirement));
  }
  if (g.order == judge::InputOrder::PassagesFirst) name += ", passages first";
  if (g.fixed_position) name += ", p=" + std::to_string(*g.fixed_position);
  return name + ")";
}

namespace {

std::vector<qa::EvidenceSource> resolve_sources(const RunConfig& c) {
  std::vector<std::string> names = c.sources;
  if (names.empty()) {
    names = {"none", "dense", "ground_truth"};
    for (const auto& g : c.grid) names.push_back(judge::label(g));
  }
  std::vector<qa::EvidenceSource> out;
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) continue;
    if (n == "none" || n == "dense" || n == "ground_truth") {
      qa::EvidenceSource s;
      s.kind = qa::parse_evidence_kind(n);
      out.push_back(s);
      continue;
    }
    auto it = std::find_if(c.grid.begin(), c.grid.end(),
                           [&](const judge::JudgeConfig& g) { return judge::label(g) == n; });
    if (it == c.grid.end()) {
      throw ContractError("source '" + n + "' names no grid entry");
    }
    out.push_back(qa::judged_source(*it));
  }
  return out;
}

Table qa_table(const qa::EvalReport& report,
               const std::map<std::string, std::string>& display) {
  std::set<corpus::DatasetKind> kinds;
  for (const auto& [label, by_kind] : report.rows) {
    for (const auto& [k, s] : by_kind) kinds.insert(k);
  }
  Table t;
  t.header = {"Evidence"};
  for (auto k : kinds) {
    t.header.push_back(std::string(corpus::to_string(k)) + " #Q");
    for (const auto& m : qa::metric_names(k)) {
      t.header.push_back(std::string(corpus::to_string(k)) + " " + m);
    }
  }
  for (const auto& label : report.source_order) {
    auto d = display.find(label);
    std::vector<std::string> row{d == display.end() ? label : d->second};
    const auto& by_kind = report.rows.at(label);
    for (auto k : kinds) {
      auto s = by_kind.find(k);
      if (s == by_kind.end()) {
        row.push_back("0");
        for (std::size_t i = 0; i < qa::metric_names(k).size(); ++i) row.push_back("-");
        continue;
      }
      row.push_back(std::to_string(s->second.count));
      for (const auto& m : qa::metric_names(k)) row.push_back(fixed2(s->second.means.at(m)));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Top-n retrieval results as a candidate set, used for the Dense source.
std::optional<corpus::CandidateSet> dense_set(const Inputs& in, const std::string& qid,
                                              std::size_t n) {
  if (!in.run) return std::nullopt;
  auto it = in.run->find(qid);
  if (it == in.run->end() || it->second.empty()) return std::nullopt;
  corpus::CandidateSet s;
  s.question_id = qid;
  for (std::size_t i = 0; i < std::min(n, it->second.size()); ++i) {
    corpus::Passage p = in.store.at(it->second[i].passage_id);
    p.origin = corpus::Origin::Retrieved;
    s.passages.push_back(std::move(p));
  }
  corpus::recount(s);
  return s;
}

}  // namespace

CommandResult run_qa(const RunConfig& config) {
  RunConfig c = config;
  resolve_grid_seeds(c);
  CommandResult result;
  const auto sources = resolve_sources(c);
  const Inputs in = load_inputs(c, false);
  const auto sets = load_candidates(c);

  qa::JudgmentStore judgments;
  for (const auto& g : c.grid) {
    const fs::path p = judgment_path(c, g);
    if (!fs::exists(p)) continue;
    for (auto& r : read_judgments(p)) judgments.add(std::move(r));
  }
  for (const auto& s : sources) {
    if (s.judge_config && !fs::exists(judgment_path(c, *s.judge_config))) {
      throw LookupError("no judgments for source '" + s.label() + "' (expected " +
                        judgment_path(c, *s.judge_config).string() + ")");
    }
  }

  auto client = make_chat_client(c, build_knowledge(in, sets));
  const Meta meta = meta_for(c);
  std::vector<qa::AnswerRecord> all;
  std::map<std::string, std::string> display;
  for (const auto& source : sources) {
    const std::string label = source.label();
    display[label] = row_name(source);
    std::vector<qa::AnswerRecord> recs;
    for (const auto& s : sets) {
      auto q = in.by_id.find(s.question_id);
      if (q == in.by_id.end()) {
        result.errors.push_back(label + "/" + s.question_id + ": unknown question");
        continue;
      }
      try {
        std::vector<corpus::Passage> evidence;
        if (source.kind == qa::EvidenceKind::Dense) {
          const auto dense = dense_set(in, s.question_id, c.candidates);
          evidence = dense ? dense->passages : s.passages;
        } else {
          evidence = qa::select_evidence(source, *q->second, s, judgments, &in.store);
        }
        auto rec = qa::generate_answer(*q->second, evidence, source, *client);
        rec.scores = qa::score_answer(q->second->dataset_kind, rec.answer_text,
                                      q->second->gold_answers);
        recs.push_back(std::move(rec));
      } catch (const Error& e) {
        result.errors.push_back(label + "/" + s.question_id + ": " + e.what());
      }
    }
    std::vector<records::json> rows;
    for (const auto& r : recs) rows.push_back(records::encode(r));
    records::write_jsonl(answer_path(c, label), meta, rows);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  records::write_text(c.out / "qa_requests.jsonl", client->log().to_jsonl());
  const auto report = qa::evaluate_answers(all, in.questions);
  write_report(c, "qa_report", "Answer quality by evidence source", qa_table(report, display),
               result.report);
  if (!result.errors.empty()) result.exit_code = 1;
  return result;
}

CommandResult run_report(const RunConfig& config) {
  RunConfig c = config;
  resolve_grid_seeds(c);
  CommandResult result;
  const Inputs in = load_inputs(c, false);
  const auto sets = load_candidates(c);

  std::map<std::string, std::vector<judge::JudgmentRecord>> by_label;
  for (const auto& g : c.grid) {
    const fs::path p = judgment_path(c, g);
    if (!fs::exists(p)) {
      result.warnings.push_back("missing " + p.string());
      continue;
    }
    by_label[judge::label(g)] = read_judgments(p);
  }
  if (!by_label.empty()) {
    write_report(c, "judge_metrics", "Judgment quality against ground truth",
                 judge_table(c, c.grid, by_label, in, sets), result.report);
    result.report += "\n";
  }

  std::vector<qa::AnswerRecord> all;
  std::map<std::string, std::string> display;
  for (const auto& source : resolve_sources(c)) {
    const fs::path p = answer_path(c, source.label());
    if (!fs::exists(p)) {
      result.warnings.push_back("missing " + p.string());
      continue;
    }
    display[source.label()] = row_name(source);
    for (const auto& row : records::read_jsonl(p).rows) {
      all.push_back(records::decode_answer(row));
    }
  }
  if (!all.empty()) {
    const auto report = qa::evaluate_answers(all, in.questions);
    write_report(c, "qa_report", "Answer quality by evidence source",
                 qa_table(report, display), result.report);
  }
  return result;
}

}  // namespace uj::pipeline
