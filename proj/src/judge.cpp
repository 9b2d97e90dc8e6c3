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

#include "uj/judge.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "uj/templates.hpp"

namespace uj::judge {

namespace t = uj::templates;

std::string_view to_string(Form form) {
  switch (form) {
    case Form::Pointwise: return "pointwise";
    case Form::Pairwise: return "pairwise";
    case Form::ListwiseSet: return "listwise_set";
    case Form::ListwiseRank: return "listwise_rank";
  }
  return "?";
}

std::string_view to_string(Judgment judgment) {
  return judgment == Judgment::Utility ? "utility" : "relevance";
}

std::string_view to_string(Requirement requirement) {
  switch (requirement) {
    case Requirement::None: return "none";
    case Requirement::COT: return "cot";
    case Requirement::Reasoning: return "reasoning";
    case Requirement::Answer: return "answer";
  }
  return "?";
}

std::string_view to_string(InputOrder order) {
  return order == InputOrder::QuestionFirst ? "question_first"
                                            : "passages_first";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Accepts the canonical names plus hyphen and camel-case spellings.
std::string canon(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

Form parse_form(std::string_view s) {
  const std::string c = canon(s);
  if (c == "pointwise") return Form::Pointwise;
  if (c == "pairwise") return Form::Pairwise;
  if (c == "listwiseset") return Form::ListwiseSet;
  if (c == "listwiserank") return Form::ListwiseRank;
  throw ContractError("unknown judgment form: " + std::string(s));
}

Judgment parse_judgment(std::string_view s) {
  const std::string c = canon(s);
  if (c == "utility") return Judgment::Utility;
  if (c == "relevance") return Judgment::Relevance;
  throw ContractError("unknown judgment: " + std::string(s));
}

Requirement parse_requirement(std::string_view s) {
  const std::string c = canon(s);
  if (c == "none") return Requirement::None;
  if (c == "cot") return Requirement::COT;
  if (c == "reasoning") return Requirement::Reasoning;
  if (c == "answer") return Requirement::Answer;
  throw ContractError("unknown requirement: " + std::string(s));
}

InputOrder parse_input_order(std::string_view s) {
  const std::string c = canon(s);
  if (c == "questionfirst" || c == "qf") return InputOrder::QuestionFirst;
  if (c == "passagesfirst" || c == "pf") return InputOrder::PassagesFirst;
  throw ContractError("unknown input order: " + std::string(s));
}

void validate(const JudgeConfig& config) {
  const bool listwise = config.form == Form::ListwiseSet ||
                        config.form == Form::ListwiseRank;
  if (config.judgment == Judgment::Relevance && !listwise) {
    throw ContractError("relevance judgments take listwise input only");
  }
  if (config.k_samples < 1) throw ContractError("k_samples must be >= 1");
  if (config.k_samples > 1 && config.form != Form::ListwiseSet) {
    throw ContractError("k-sampling is defined for listwise-set only");
  }
}

bool is_flagged(const JudgeConfig& config) {
  return config.form == Form::Pairwise &&
         config.requirement == Requirement::Answer;
}

std::string label(const JudgeConfig& config) {
  std::string out = std::string(to_string(config.judgment)) + "-" +
                    std::string(to_string(config.form));
  if (config.k_samples > 1) out += "-k" + std::to_string(config.k_samples);
  if (config.requirement != Requirement::None) {
    out += "-" + std::string(to_string(config.requirement));
  }
  if (config.order == InputOrder::PassagesFirst) out += "-pf";
  if (config.fixed_position) out += "-p" + std::to_string(*config.fixed_position);
  return out;
}

// ---- prompts ----

std::size_t passages_per_prompt(Form form, std::size_t n) {
  switch (form) {
    case Form::Pointwise: return 1;
    case Form::Pairwise: return 2;
    default: return n;
  }
}

namespace {

std::string flatten(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) out += (c == '\n' || c == '\r') ? ' ' : c;
  return out;
}

std::string task_sentence(Form form, Judgment judgment, std::size_t n) {
  switch (form) {
    case Form::Pointwise: return std::string(t::kPointwiseUtilityTask);
    case Form::Pairwise: return std::string(t::kPairwiseUtilityTask);
    case Form::ListwiseSet:
      return std::string(judgment == Judgment::Utility ? t::kSetUtilityTask
                                                       : t::kSetRelevanceTask);
    case Form::ListwiseRank:
      return std::string(t::kRankTaskPrefix) + std::to_string(n) +
             std::string(judgment == Judgment::Utility ? t::kRankUtilitySuffix
                                                       : t::kRankRelevanceSuffix);
  }
  return {};
}

std::string_view requirement_line(Requirement requirement) {
  switch (requirement) {
    case Requirement::None: return t::kNoRequirement;
    case Requirement::COT: return t::kCotRequirement;
    case Requirement::Reasoning: return t::kReasoningRequirement;
    case Requirement::Answer: return t::kAnswerRequirement;
  }
  return {};
}

std::string_view output_line(Form form) {
  switch (form) {
    case Form::Pointwise: return t::kPointwiseOutput;
    case Form::Pairwise: return t::kPairwiseOutput;
    case Form::ListwiseSet: return t::kSetOutput;
    case Form::ListwiseRank: return t::kRankOutput;
  }
  return {};
}

}  // namespace

std::string render_prompt(const JudgeConfig& config, const Question& question,
                          std::span<const Passage> passages) {
  validate(config);
  const std::size_t need = passages_per_prompt(config.form, passages.size());
  if (passages.empty() || passages.size() != need) {
    throw ContractError("render_prompt: " + std::string(to_string(config.form)) +
                        " takes " +
                        (config.form == Form::Pointwise ? std::string("1")
                         : config.form == Form::Pairwise ? std::string("2")
                                                         : std::string("N >= 1")) +
                        " passages, got " + std::to_string(passages.size()));
  }
  std::string question_block = std::string(t::kQuestionLabel) + flatten(question.text);
  std::string passage_block;
  for (std::size_t i = 0; i < passages.size(); ++i) {
    if (i > 0) passage_block += '\n';
    passage_block += std::string(t::kPassagePrefix) + std::to_string(i + 1) +
                     ": " + flatten(passages[i].text);
  }
  std::string out;
  if (config.order == InputOrder::QuestionFirst) {
    out = question_block + "\n\n" + passage_block;
  } else {
    out = passage_block + "\n\n" + question_block;
  }
  out += "\n\n" + task_sentence(config.form, config.judgment, passages.size());
  out += '\n';
  out += requirement_line(config.requirement);
  out += '\n';
  out += output_line(config.form);
  return out;
}

// ---- parsing ----

namespace {

std::vector<std::string> split_lines(std::string_view raw) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : raw) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

// Strips markdown emphasis, quotes and list bullets around a line.
std::string clean_line(std::string_view line) {
  auto is_deco = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '*' ||
           c == '#' || c == '>' || c == '`' || c == '"' || c == '_';
  };
  std::size_t b = 0;
  std::size_t e = line.size();
  while (b < e && is_deco(line[b])) ++b;
  while (e > b && is_deco(line[e - 1])) --e;
  std::string out(line.substr(b, e - b));
  // "**Passages:** 1, 2" leaves emphasis right after the colon.
  out.erase(std::remove(out.begin(), out.end(), '*'), out.end());
  return out;
}

std::string_view answer_prefix(Form form) {
  switch (form) {
    case Form::Pointwise: return t::kPointwiseAnswerLine;
    case Form::Pairwise: return t::kPairwiseAnswerLine;
    case Form::ListwiseSet: return t::kSetAnswerLine;
    case Form::ListwiseRank: return t::kRankAnswerLine;
  }
  return {};
}

// Text after the form's prefix on the last line that carries it.
std::optional<std::string> answer_line(Form form,
                                       const std::vector<std::string>& lines) {
  const std::string prefix = lower(answer_prefix(form));
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const std::string cleaned = clean_line(*it);
    if (lower(cleaned).starts_with(prefix)) return cleaned.substr(prefix.size());
  }
  return std::nullopt;
}

const std::regex& tag_pattern() {
  static const std::regex re(R"(passage\s*[-_ ]?\s*(\d+))", std::regex::icase);
  return re;
}

std::vector<long long> tagged_numbers(const std::string& s) {
  std::vector<long long> out;
  for (std::sregex_iterator it(s.begin(), s.end(), tag_pattern()), end;
       it != end; ++it) {
    out.push_back(std::stoll((*it)[1].str().substr(0, 12)));
  }
  return out;
}

std::vector<long long> bare_numbers(const std::string& s) {
  static const std::regex re(R"(\d+)");
  std::vector<long long> out;
  for (std::sregex_iterator it(s.begin(), s.end(), re), end; it != end; ++it) {
    out.push_back(std::stoll(it->str().substr(0, 12)));
  }
  return out;
}

std::vector<long long> line_numbers(const std::string& s) {
  auto tags = tagged_numbers(s);
  return tags.empty() ? bare_numbers(s) : tags;
}

std::optional<bool> first_yes_no(const std::string& s) {
  std::string word;
  auto check = [&]() -> std::optional<bool> {
    if (word == "yes") return true;
    if (word == "no") return false;
    return std::nullopt;
  };
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      if (auto v = check()) return v;
      word.clear();
    }
  }
  return check();
}

// Converts 1-based identifiers to unique 0-based indices below n.
std::vector<std::size_t> to_indices(const std::vector<long long>& numbers,
                                    std::size_t n,
                                    std::vector<std::string>& warnings) {
  std::vector<std::size_t> out;
  std::set<std::size_t> seen;
  for (long long v : numbers) {
    if (v < 1 || static_cast<unsigned long long>(v) > n) {
      warnings.push_back("passage identifier " + std::to_string(v) +
                         " out of range 1.." + std::to_string(n) + ", dropped");
      continue;
    }
    const auto idx = static_cast<std::size_t>(v - 1);
    if (!seen.insert(idx).second) {
      warnings.push_back("passage identifier " + std::to_string(v) +
                         " repeated, dropped");
      continue;
    }
    out.push_back(idx);
  }
  return out;
}

bool says_none(const std::string& s) {
  const std::string l = lower(s);
  return l.find("none") != std::string::npos ||
         l.find("no passage") != std::string::npos;
}

}  // namespace

ParsedOutput parse_output(Form form, std::string_view raw, std::size_t n) {
  ParsedOutput out;
  const auto lines = split_lines(raw);
  const auto line = answer_line(form, lines);

  switch (form) {
    case Form::Pointwise: {
      std::optional<bool> v;
      if (line) v = first_yes_no(*line);
      if (!v) v = first_yes_no(std::string(raw));
      if (v) {
        out.ok = true;
        out.verdict = *v;
      }
      return out;
    }
    case Form::Pairwise: {
      std::vector<long long> numbers;
      if (line) numbers = line_numbers(*line);
      if (numbers.empty()) {
        for (auto it = lines.rbegin(); it != lines.rend() && numbers.empty(); ++it) {
          numbers = tagged_numbers(*it);
        }
      }
      if (!numbers.empty() && (numbers.front() == 1 || numbers.front() == 2)) {
        out.ok = true;
        out.winner = static_cast<std::size_t>(numbers.front() - 1);
      }
      return out;
    }
    case Form::ListwiseSet:
    case Form::ListwiseRank: {
      std::vector<long long> numbers;
      bool explicit_empty = false;
      if (line) {
        numbers = line_numbers(*line);
        explicit_empty = numbers.empty() && says_none(*line);
      } else {
        for (auto it = lines.rbegin(); it != lines.rend() && numbers.empty(); ++it) {
          numbers = tagged_numbers(*it);
        }
      }
      if (numbers.empty()) {
        out.ok = form == Form::ListwiseSet && explicit_empty;
        return out;
      }
      out.indices = to_indices(numbers, n, out.warnings);
      if (out.indices.empty()) return out;
      out.ok = true;
      if (form == Form::ListwiseRank && out.indices.size() < n) {
        std::set<std::size_t> present(out.indices.begin(), out.indices.end());
        for (std::size_t i = 0; i < n; ++i) {
          if (present.count(i) == 0) out.indices.push_back(i);
        }
        out.warnings.push_back("ranking named " + std::to_string(present.size()) +
                               " of " + std::to_string(n) +
                               " passages; the rest appended in index order");
      }
      return out;
    }
  }
  return out;
}

// ---- judging ----

std::size_t expected_call_count(const JudgeConfig& config, std::size_t n) {
  switch (config.form) {
    case Form::Pointwise: return n;
    case Form::Pairwise: return n * (n - (n > 0 ? 1 : 0)) / 2;
    default: return static_cast<std::size_t>(config.k_samples);
  }
}

namespace {

struct CallResult {
  std::string prompt_hash;
  std::string raw;
  ParsedOutput parsed;
  bool reprompted = false;
};

CallResult call_and_parse(clients::ChatClient& client, const JudgeConfig& config,
                          const std::string& prompt, std::size_t n) {
  CallResult r;
  clients::ChatRequest request;
  request.user_message = prompt;
  request.temperature = clients::kJudgeTemperature;
  r.prompt_hash = clients::prompt_hash(request);
  r.raw = client.chat(request).text;
  r.parsed = parse_output(config.form, r.raw, n);
  if (!r.parsed.ok && config.reprompt_on_parse_failure) {
    clients::ChatRequest again = request;
    again.user_message = prompt + "\n\n" + std::string(kRepromptSuffix);
    r.reprompted = true;
    r.raw = client.chat(again).text;
    r.parsed = parse_output(config.form, r.raw, n);
  }
  return r;
}

// Runs fn(i) for i in [0, count) on a few threads; results are stored by
// index and the first exception (lowest index) is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
  constexpr std::size_t kWorkers = 8;
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const std::size_t w = std::min(kWorkers, count);
  for (std::size_t i = 1; i < w; ++i) threads.emplace_back(worker);
  if (count > 0) worker();
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

JudgmentRecord start_record(const Question& question,
                            const CandidateSet& candidates,
                            const JudgeConfig& config, Form expected) {
  validate(config);
  if (config.form != expected &&
      !(expected == Form::ListwiseSet && config.form == Form::ListwiseRank)) {
    throw ContractError("judge called with form " +
                        std::string(to_string(config.form)));
  }
  if (candidates.passages.empty()) throw ContractError("judge: empty candidate set");
  JudgmentRecord rec;
  rec.question_id = question.id;
  rec.config = config;
  rec.presentation.resize(candidates.size());
  std::iota(rec.presentation.begin(), rec.presentation.end(), 0);
  return rec;
}

void absorb(JudgmentRecord& rec, const CallResult& r, std::string_view where) {
  rec.prompt_hashes.push_back(r.prompt_hash);
  rec.raw_outputs.push_back(r.raw);
  ++rec.call_count;
  if (r.reprompted) ++rec.reprompt_count;
  for (const auto& w : r.parsed.warnings) {
    rec.warnings.push_back(std::string(where) + ": " + w);
  }
  if (!r.parsed.ok) {
    ++rec.parse_failures;
    rec.warnings.push_back(std::string(where) + ": unparseable output");
  }
}

}  // namespace

JudgmentRecord judge_pointwise(const Question& question,
                               const CandidateSet& candidates,
                               clients::ChatClient& client,
                               const JudgeConfig& config) {
  JudgmentRecord rec = start_record(question, candidates, config, Form::Pointwise);
  const std::size_t n = candidates.size();
  std::vector<CallResult> results(n);
  parallel_for(n, [&](std::size_t i) {
    const std::string prompt = render_prompt(
        config, question, std::span<const Passage>(&candidates.passages[i], 1));
    results[i] = call_and_parse(client, config, prompt, 1);
  });
  rec.result_kind = ResultKind::SelectedSet;
  for (std::size_t i = 0; i < n; ++i) {
    absorb(rec, results[i], "passage " + std::to_string(i));
    if (results[i].parsed.ok && results[i].parsed.verdict) rec.selected.push_back(i);
  }
  return rec;
}

JudgmentRecord judge_pairwise(const Question& question,
                              const CandidateSet& candidates,
                              clients::ChatClient& client,
                              const JudgeConfig& config) {
  JudgmentRecord rec = start_record(question, candidates, config, Form::Pairwise);
  const std::size_t n = candidates.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<CallResult> results(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const std::vector<Passage> two = {candidates.passages[i], candidates.passages[j]};
    results[p] = call_and_parse(client, config,
                                render_prompt(config, question, two), 2);
  });
  std::vector<int> wins(n, 0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    absorb(rec, results[p],
           "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    const bool second = results[p].parsed.ok && results[p].parsed.winner == 1;
    ++wins[second ? j : i];
  }
  rec.result_kind = ResultKind::Ranking;
  rec.ranking = rank_by_wins(wins);
  return rec;
}

JudgmentRecord judge_listwise(const Question& question,
                              const CandidateSet& candidates,
                              clients::ChatClient& client,
                              const JudgeConfig& config) {
  JudgmentRecord rec = start_record(question, candidates, config, Form::ListwiseSet);
  if (config.k_samples != 1) {
    throw ContractError("judge_listwise takes k_samples = 1");
  }
  const std::size_t n = candidates.size();
  const CallResult r = call_and_parse(
      client, config, render_prompt(config, question, candidates.passages), n);
  absorb(rec, r, "listwise");
  if (config.form == Form::ListwiseSet) {
    rec.result_kind = ResultKind::SelectedSet;
    if (r.parsed.ok) {
      rec.selected = r.parsed.indices;
      std::sort(rec.selected.begin(), rec.selected.end());
    }
  } else {
    rec.result_kind = ResultKind::Ranking;
    if (r.parsed.ok) rec.ranking = r.parsed.indices;
  }
  return rec;
}

std::vector<std::size_t> sampling_order(std::uint64_t seed, int iteration,
                                        std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(iteration)));
  rng.shuffle(order);
  return order;
}

CandidateSet reorder(const CandidateSet& candidates,
                     std::span<const std::size_t> order) {
  if (order.size() != candidates.size()) {
    throw ContractError("reorder: permutation size mismatch");
  }
  std::vector<bool> seen(order.size(), false);
  CandidateSet out;
  out.question_id = candidates.question_id;
  out.seed = candidates.seed;
  out.composition = candidates.composition;
  for (std::size_t idx : order) {
    if (idx >= order.size() || seen[idx]) {
      throw ContractError("reorder: not a permutation");
    }
    seen[idx] = true;
    out.passages.push_back(candidates.passages[idx]);
  }
  return out;
}

VoteOutcome aggregate_votes(
    const std::vector<std::optional<std::vector<std::size_t>>>& iterations) {
  VoteOutcome out;
  std::map<std::size_t, int> size_freq;
  for (const auto& it : iterations) {
    if (!it) continue;
    ++size_freq[it->size()];
    for (std::size_t idx : *it) ++out.votes[idx];
  }
  if (size_freq.empty()) return out;
  int best = -1;
  for (const auto& [size, freq] : size_freq) {
    if (freq > best) {  // ascending sizes, so ties keep the smaller one
      best = freq;
      out.modal_size = size;
    }
  }
  std::vector<std::pair<std::size_t, int>> ranked(out.votes.begin(), out.votes.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (std::size_t i = 0; i < std::min(out.modal_size, ranked.size()); ++i) {
    out.selected.push_back(ranked[i].first);
  }
  std::sort(out.selected.begin(), out.selected.end());
  return out;
}

JudgmentRecord k_sampling_judge(const Question& question,
                                const CandidateSet& candidates,
                                clients::ChatClient& client,
                                const JudgeConfig& config) {
  JudgmentRecord rec = start_record(question, candidates, config, Form::ListwiseSet);
  if (config.form != Form::ListwiseSet) {
    throw ContractError("k-sampling takes the listwise-set form");
  }
  const std::size_t n = candidates.size();
  const int k = config.k_samples;
  std::vector<CallResult> results(static_cast<std::size_t>(k));
  std::vector<std::vector<std::size_t>> orders(static_cast<std::size_t>(k));
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t t) {
    orders[t] = sampling_order(config.seed, static_cast<int>(t) + 1, n);
    const CandidateSet shuffled = reorder(candidates, orders[t]);
    results[t] = call_and_parse(client, config,
                                render_prompt(config, question, shuffled.passages), n);
  });
  std::vector<std::optional<std::vector<std::size_t>>> votes;
  for (std::size_t t = 0; t < results.size(); ++t) {
    absorb(rec, results[t], "iteration " + std::to_string(t + 1));
    if (!results[t].parsed.ok) {
      votes.emplace_back(std::nullopt);
      continue;
    }
    std::vector<std::size_t> original;
    for (std::size_t pos : results[t].parsed.indices) original.push_back(orders[t][pos]);
    votes.emplace_back(std::move(original));
  }
  rec.result_kind = ResultKind::SelectedSet;
  rec.selected = aggregate_votes(votes).selected;
  return rec;
}

JudgmentRecord judge(const Question& question, const CandidateSet& candidates,
                     clients::ChatClient& client, const JudgeConfig& config) {
  validate(config);
  std::vector<std::size_t> presentation(candidates.size());
  std::iota(presentation.begin(), presentation.end(), 0);
  CandidateSet shown = candidates;
  if (config.fixed_position) {
    if (*config.fixed_position >= candidates.size()) {
      throw ContractError("fixed position " + std::to_string(*config.fixed_position) +
                          " outside the candidate set");
    }
    // Track where each original index ends up by tagging ids.
    CandidateSet tagged = candidates;
    for (std::size_t i = 0; i < tagged.size(); ++i) {
      tagged.passages[i].id = std::to_string(i) + "\x1f" + tagged.passages[i].id;
    }
    Question tagged_q = question;
    tagged_q.ground_truth_evidence_ids.clear();
    for (std::size_t i : candidates.ground_truth_indices(question)) {
      tagged_q.ground_truth_evidence_ids.push_back(tagged.passages[i].id);
    }
    // Gold passages with a non-GroundTruth origin are found through the ids
    // above; GroundTruth-origin ones through their origin.
    const CandidateSet placed =
        place_ground_truth(tagged, tagged_q, *config.fixed_position);
    for (std::size_t p = 0; p < placed.size(); ++p) {
      const std::string& id = placed.passages[p].id;
      presentation[p] = std::stoul(id.substr(0, id.find('\x1f')));
      shown.passages[p] = candidates.passages[presentation[p]];
    }
  }

  JudgmentRecord rec;
  switch (config.form) {
    case Form::Pointwise: rec = judge_pointwise(question, shown, client, config); break;
    case Form::Pairwise: rec = judge_pairwise(question, shown, client, config); break;
    case Form::ListwiseRank: rec = judge_listwise(question, shown, client, config); break;
    case Form::ListwiseSet:
      rec = config.k_samples > 1 ? k_sampling_judge(question, shown, client, config)
                                 : judge_listwise(question, shown, client, config);
      break;
  }
  rec.presentation = presentation;
  for (auto& idx : rec.selected) idx = presentation[idx];
  std::sort(rec.selected.begin(), rec.selected.end());
  for (auto& idx : rec.ranking) idx = presentation[idx];
  return rec;
}

std::vector<std::size_t> rank_by_wins(std::span<const int> wins) {
  std::vector<std::size_t> order(wins.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return wins[a] > wins[b]; });
  return order;
}

}  // namespace uj::judge
