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

#include "uj/clients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "uj/corpus.hpp"

namespace uj::clients {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// ---- chat ----

void validate(const ChatRequest& request) {
  if (request.user_message.empty()) {
    throw ContractError("chat request has an empty user message");
  }
  if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
    throw ContractError("chat temperature outside [0, 2]");
  }
  if (request.max_output_tokens <= 0) {
    throw ContractError("max_output_tokens must be positive");
  }
}

std::string prompt_hash(std::string_view user_message) {
  return sha256_hex(user_message);
}

std::string prompt_hash(const ChatRequest& request) {
  if (!request.system_message) return prompt_hash(request.user_message);
  std::string joined = *request.system_message;
  joined.push_back('\x1f');
  joined += request.user_message;
  return sha256_hex(joined);
}

void RequestLog::append(RequestLogEntry entry) {
  std::lock_guard lock(mu_);
  entry.sequence = next_sequence_++;
  entries_.push_back(std::move(entry));
}

std::vector<RequestLogEntry> RequestLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t RequestLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void RequestLog::clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
  next_sequence_ = 0;
}

std::size_t RequestLog::max_overlap() const {
  std::vector<std::pair<Clock::time_point, int>> events;
  {
    std::lock_guard lock(mu_);
    for (const auto& e : entries_) {
      events.emplace_back(e.start, +1);
      events.emplace_back(e.end, -1);
    }
  }
  // Ends sort before starts at the same instant: intervals are half-open.
  std::sort(events.begin(), events.end());
  std::size_t best = 0;
  long cur = 0;
  for (const auto& [t, d] : events) {
    cur += d;
    best = std::max<std::size_t>(best, static_cast<std::size_t>(std::max(0L, cur)));
  }
  return best;
}

std::string RequestLog::to_jsonl() const {
  auto rows = entries();
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.prompt_hash < b.prompt_hash;
  });
  std::string out;
  for (const auto& e : rows) {
    json j = {{"backend", e.backend},
              {"prompt_hash", e.prompt_hash},
              {"attempts", e.attempts},
              {"retries", e.retries()},
              {"ok", e.ok}};
    if (!e.error.empty()) j["error"] = e.error;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry,
                                        Rng& rng) {
  const double base = static_cast<double>(policy.backoff_base.count());
  double delay = base * std::ldexp(1.0, std::min(retry, 30));
  delay = std::min(delay, static_cast<double>(policy.backoff_cap.count()));
  delay += delay * policy.jitter_fraction * rng.uniform01();
  return std::chrono::milliseconds(static_cast<long long>(delay));
}

std::string chat_request_body(const ChatRequest& request,
                              std::string_view model_name) {
  json messages = json::array();
  if (request.system_message) {
    messages.push_back({{"role", "system"}, {"content", *request.system_message}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user_message}});
  json body = {{"model", request.model_name.empty() ? std::string(model_name)
                                                    : request.model_name},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_output_tokens}};
  return body.dump();
}

ChatResponse parse_chat_response_body(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what());
  }
  ChatResponse r;
  try {
    const json& content = j.at("choices").at(0).at("message").at("content");
    r.text = content.is_null() ? std::string() : content.get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("chat response lacks content: ") +
                         e.what());
  }
  if (auto it = j.find("usage"); it != j.end() && it->is_object()) {
    r.token_usage = TokenUsage{it->value("prompt_tokens", 0),
                               it->value("completion_tokens", 0)};
  }
  return r;
}

namespace {

struct Url {
  std::string scheme_host_port;
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigurationError("endpoint '" + url + "' lacks a scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

// RAII slot in a counting semaphore.
class LimiterSlot {
 public:
  explicit LimiterSlot(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~LimiterSlot() { sem_.release(); }
  LimiterSlot(const LimiterSlot&) = delete;
  LimiterSlot& operator=(const LimiterSlot&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

httplib::Result post_json(const std::string& base, const std::string& path,
                          const httplib::Headers& headers,
                          const std::string& body,
                          std::chrono::seconds timeout) {
  httplib::Client cli(base);
  cli.set_connection_timeout(std::min<std::chrono::seconds>(timeout, std::chrono::seconds(30)));
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  return cli.Post(path, headers, body, "application/json");
}

}  // namespace

HttpChatClient::HttpChatClient(HttpChatConfig config)
    : config_(std::move(config)),
      limiter_(std::max(1, config_.parallelism)),
      jitter_rng_(0x5eedULL) {
  split_url(config_.endpoint);
  if (config_.retry.max_attempts < 1) {
    throw ConfigurationError("retry cap must allow at least one attempt");
  }
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigurationError("credential variable " + config_.api_key_env +
                               " is not set");
    }
    api_key_ = key;
  }
}

HttpChatClient::~HttpChatClient() = default;

ChatResponse HttpChatClient::chat(const ChatRequest& request) {
  validate(request);
  const Url url = split_url(config_.endpoint);
  const std::string body = chat_request_body(request, config_.model_name);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }

  LimiterSlot slot(limiter_);
  RequestLogEntry entry;
  entry.backend = "http";
  entry.prompt_hash = prompt_hash(request);
  entry.start = Clock::now();

  auto finish = [&](bool ok, std::string error) {
    entry.ok = ok;
    entry.error = std::move(error);
    entry.end = Clock::now();
    log_.append(entry);
  };

  std::string last_error;
  for (int attempt = 0; attempt < config_.retry.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::chrono::milliseconds delay;
      {
        std::lock_guard lock(rng_mu_);
        delay = backoff_delay(config_.retry, attempt - 1, jitter_rng_);
      }
      std::this_thread::sleep_for(delay);
    }
    entry.attempts = attempt + 1;
    auto res = post_json(url.scheme_host_port, url.path, headers, body,
                         config_.timeout);
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
      continue;
    }
    const int status = res->status;
    if (status == 200) {
      ChatResponse out;
      try {
        out = parse_chat_response_body(res->body);
      } catch (const Error& e) {
        finish(false, e.what());
        throw;
      }
      out.latency = Clock::now() - entry.start;
      if (out.text.empty()) {
        finish(false, "empty completion");
        throw EmptyOutputError("backend returned an empty completion");
      }
      finish(true, "");
      return out;
    }
    if (status == 429 || status >= 500) {
      last_error = "HTTP " + std::to_string(status);
      continue;
    }
    const std::string msg = "HTTP " + std::to_string(status) + ": " + res->body;
    finish(false, msg);
    if (status >= 400) throw ConfigurationError(msg);
    throw TransportError(msg);
  }
  finish(false, last_error);
  throw TransportError("all " + std::to_string(config_.retry.max_attempts) +
                       " attempts failed: " + last_error);
}

void ScriptedChatClient::script(const std::string& prompt_hash,
                                std::string response) {
  script_sequence(prompt_hash, {std::move(response)});
}

void ScriptedChatClient::script_sequence(const std::string& prompt_hash,
                                         std::vector<std::string> responses) {
  if (responses.empty()) throw ContractError("empty response sequence");
  std::lock_guard lock(mu_);
  script_[prompt_hash] = std::move(responses);
  cursor_[prompt_hash] = 0;
}

void ScriptedChatClient::load_script(std::string_view jsonl) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed script record: ") + e.what(),
                       line_no);
    }
    std::string key;
    if (j.contains("prompt_hash")) {
      key = j["prompt_hash"].get<std::string>();
    } else if (j.contains("prompt")) {
      key = prompt_hash(j["prompt"].get<std::string>());
    } else {
      throw ParseError("script record needs prompt_hash or prompt", line_no);
    }
    if (j.contains("responses")) {
      script_sequence(key, j["responses"].get<std::vector<std::string>>());
    } else if (j.contains("response")) {
      script(key, j["response"].get<std::string>());
    } else {
      throw ParseError("script record needs response or responses", line_no);
    }
  }
}

ChatResponse ScriptedChatClient::chat(const ChatRequest& request) {
  validate(request);
  RequestLogEntry entry;
  entry.backend = "mock:scripted";
  entry.prompt_hash = prompt_hash(request);
  entry.attempts = 1;
  entry.start = Clock::now();
  std::optional<std::string> text;
  {
    std::lock_guard lock(mu_);
    auto it = script_.find(entry.prompt_hash);
    if (it != script_.end()) {
      std::size_t& cur = cursor_[entry.prompt_hash];
      text = it->second[std::min(cur, it->second.size() - 1)];
      ++cur;
    } else if (!strict_ && fallback_) {
      text = fallback_;
    }
  }
  entry.end = Clock::now();
  if (!text) {
    entry.error = "no scripted response";
    log_.append(entry);
    throw UnscriptedError("no scripted response for prompt " +
                          entry.prompt_hash);
  }
  if (text->empty()) {
    entry.error = "empty completion";
    log_.append(entry);
    throw EmptyOutputError("scripted response is empty");
  }
  entry.ok = true;
  log_.append(entry);
  return ChatResponse{*text, std::nullopt, entry.end - entry.start};
}

FunctionChatClient::FunctionChatClient(std::string backend_name,
                                       Handler handler, int parallelism)
    : backend_name_(std::move(backend_name)),
      handler_(std::move(handler)),
      limiter_(std::max(1, parallelism)) {}

ChatResponse FunctionChatClient::chat(const ChatRequest& request) {
  validate(request);
  LimiterSlot slot(limiter_);
  RequestLogEntry entry;
  entry.backend = backend_name_;
  entry.prompt_hash = prompt_hash(request);
  entry.attempts = 1;
  entry.start = Clock::now();
  std::string text;
  try {
    text = handler_(request);
  } catch (const std::exception& e) {
    entry.end = Clock::now();
    entry.error = e.what();
    log_.append(entry);
    throw;
  }
  entry.end = Clock::now();
  if (text.empty()) {
    entry.error = "empty completion";
    log_.append(entry);
    throw EmptyOutputError(backend_name_ + " returned an empty completion");
  }
  entry.ok = true;
  log_.append(entry);
  return ChatResponse{std::move(text), std::nullopt, entry.end - entry.start};
}

// ---- NER ----

std::string_view to_string(EntityCategory category) {
  switch (category) {
    case EntityCategory::Person: return "Person";
    case EntityCategory::Date: return "Date";
    case EntityCategory::Numeric: return "Numeric";
    case EntityCategory::Organization: return "Organization";
    case EntityCategory::Location: return "Location";
    case EntityCategory::Other: return "Other";
  }
  return "Other";
}

EntityCategory parse_entity_category(std::string_view s) {
  for (EntityCategory c : kEntityCategories) {
    if (to_string(c) == s) return c;
  }
  if (s == "Other") return EntityCategory::Other;
  throw ContractError("unknown entity category '" + std::string(s) + "'");
}

LabelMap LabelMap::defaults() {
  LabelMap m;
  m.set("PERSON", EntityCategory::Person);
  m.set("PER", EntityCategory::Person);
  m.set("DATE", EntityCategory::Date);
  m.set("TIME", EntityCategory::Date);
  m.set("CARDINAL", EntityCategory::Numeric);
  m.set("QUANTITY", EntityCategory::Numeric);
  m.set("MONEY", EntityCategory::Numeric);
  m.set("PERCENT", EntityCategory::Numeric);
  m.set("ORDINAL", EntityCategory::Numeric);
  m.set("ORG", EntityCategory::Organization);
  m.set("GPE", EntityCategory::Location);
  m.set("LOC", EntityCategory::Location);
  m.set("FAC", EntityCategory::Location);
  return m;
}

void LabelMap::set(std::string label, EntityCategory category) {
  table_.insert_or_assign(std::move(label), category);
}

EntityCategory LabelMap::map(std::string_view label) const {
  auto it = table_.find(label);
  if (it != table_.end()) return it->second;
  for (EntityCategory c : kEntityCategories) {
    if (to_string(c) == label) return c;
  }
  std::lock_guard lock(warnings_->mu);
  warnings_->items.push_back("unmapped NER label '" + std::string(label) +
                             "' treated as Other");
  return EntityCategory::Other;
}

std::vector<std::string> LabelMap::warnings() const {
  std::lock_guard lock(warnings_->mu);
  return warnings_->items;
}

namespace {

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || u >= 0x80;
}

// Keeps the earliest span at each point, dropping ones that overlap it.
std::vector<EntitySpan> sort_and_drop_overlaps(std::vector<EntitySpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
    if (a.char_start != b.char_start) return a.char_start < b.char_start;
    return a.char_end > b.char_end;
  });
  std::vector<EntitySpan> out;
  for (auto& s : spans) {
    if (!out.empty() && s.char_start < out.back().char_end) continue;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

GazetteerNer::GazetteerNer(std::map<std::string, EntityCategory> entries)
    : entries_(std::move(entries)) {}

void GazetteerNer::add(std::string surface, EntityCategory category) {
  if (surface.empty()) throw ContractError("empty gazetteer surface");
  entries_.insert_or_assign(std::move(surface), category);
}

std::vector<EntitySpan> GazetteerNer::ner(std::string_view text) {
  if (text.empty()) throw ContractError("ner: empty text");
  std::vector<EntitySpan> spans;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0 && is_word_char(text[i - 1]) && is_word_char(text[i])) continue;
    const EntitySpan* best = nullptr;
    EntitySpan candidate;
    for (const auto& [surface, category] : entries_) {
      if (text.compare(i, surface.size(), surface) != 0) continue;
      const std::size_t end = i + surface.size();
      if (end < text.size() && is_word_char(text[end]) &&
          is_word_char(surface.back())) {
        continue;
      }
      if (best == nullptr || surface.size() > candidate.surface.size()) {
        candidate = EntitySpan{surface, category, i, end};
        best = &candidate;
      }
    }
    if (best != nullptr) {
      spans.push_back(candidate);
      i = candidate.char_end - 1;
    }
  }
  return sort_and_drop_overlaps(std::move(spans));
}

std::vector<EntitySpan> parse_ner_response(std::string_view text,
                                           std::string_view body,
                                           const LabelMap& labels) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw TransportError(std::string("malformed /ner response: ") + e.what());
  }
  std::vector<EntitySpan> spans;
  for (const json& e : j.at("entities")) {
    EntitySpan s;
    s.surface = e.at("surface").get<std::string>();
    s.category = labels.map(e.at("label").get<std::string>());
    s.char_start = e.at("start").get<std::size_t>();
    s.char_end = e.at("end").get<std::size_t>();
    if (s.char_start >= s.char_end || s.char_end > text.size() ||
        text.substr(s.char_start, s.char_end - s.char_start) != s.surface) {
      throw TransportError("/ner span '" + s.surface +
                           "' does not match the source text");
    }
    spans.push_back(std::move(s));
  }
  return sort_and_drop_overlaps(std::move(spans));
}

HttpNerClient::HttpNerClient(SidecarConfig config, LabelMap labels)
    : config_(std::move(config)), labels_(std::move(labels)) {
  split_url(config_.endpoint);
}

std::vector<EntitySpan> HttpNerClient::ner(std::string_view text) {
  if (text.empty()) throw ContractError("ner: empty text");
  const Url url = split_url(config_.endpoint);
  const json body = {{"text", std::string(text)}};
  auto res = post_json(url.scheme_host_port, url.path + (url.path.ends_with('/') ? "ner" : "/ner"), {},
                       body.dump(), config_.timeout);
  if (!res) {
    throw TransportError("NER sidecar unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("NER sidecar returned HTTP " +
                         std::to_string(res->status));
  }
  return parse_ner_response(text, res->body, labels_);
}

// ---- NLI ----

std::string_view to_string(NliLabel label) {
  switch (label) {
    case NliLabel::Entailment: return "entailment";
    case NliLabel::Contradiction: return "contradiction";
    case NliLabel::Neutral: return "neutral";
  }
  return "neutral";
}

NliLabel parse_nli_label(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "entailment") return NliLabel::Entailment;
  if (lower == "contradiction") return NliLabel::Contradiction;
  if (lower == "neutral") return NliLabel::Neutral;
  throw ContractError("unknown NLI label '" + std::string(s) + "'");
}

void validate(const NliVerdict& verdict) {
  const auto& s = verdict.scores;
  if (std::abs(s[0] + s[1] + s[2] - 1.0) > 1e-6) {
    throw ContractError("NLI scores do not sum to 1");
  }
  const auto argmax = static_cast<std::size_t>(
      std::max_element(s.begin(), s.end()) - s.begin());
  if (argmax != static_cast<std::size_t>(verdict.label)) {
    throw ContractError("NLI label disagrees with score argmax");
  }
}

NliVerdict make_verdict(NliLabel label) {
  NliVerdict v;
  v.label = label;
  v.scores = {0.0, 0.0, 0.0};
  v.scores[static_cast<std::size_t>(label)] = 1.0;
  return v;
}

void TableNli::set(std::string premise, std::string hypothesis,
                   NliVerdict verdict) {
  validate(verdict);
  std::lock_guard lock(mu_);
  table_.insert_or_assign({std::move(premise), std::move(hypothesis)},
                          verdict);
}

NliVerdict TableNli::nli(std::string_view premise,
                         std::string_view hypothesis) {
  if (premise.empty() || hypothesis.empty()) {
    throw ContractError("nli: empty premise or hypothesis");
  }
  {
    std::lock_guard lock(mu_);
    auto it = table_.find({std::string(premise), std::string(hypothesis)});
    if (it != table_.end()) return it->second;
  }
  if (premise == hypothesis) return make_verdict(NliLabel::Entailment);
  if (containment_entails_) {
    const std::string h = corpus::normalize_text(hypothesis);
    if (!h.empty() &&
        corpus::normalize_text(premise).find(h) != std::string::npos) {
      return make_verdict(NliLabel::Entailment);
    }
  }
  if (default_) return make_verdict(*default_);
  throw UnscriptedError("no NLI table entry for the given pair");
}

NliVerdict parse_nli_response(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw TransportError(std::string("malformed /nli response: ") + e.what());
  }
  NliVerdict v;
  v.label = parse_nli_label(j.at("label").get<std::string>());
  const auto scores = j.at("scores").get<std::vector<double>>();
  if (scores.size() != 3) throw TransportError("/nli scores must have 3 entries");
  std::copy(scores.begin(), scores.end(), v.scores.begin());
  return v;
}

HttpNliClient::HttpNliClient(SidecarConfig config)
    : config_(std::move(config)) {
  split_url(config_.endpoint);
}

NliVerdict HttpNliClient::nli(std::string_view premise,
                              std::string_view hypothesis) {
  if (premise.empty() || hypothesis.empty()) {
    throw ContractError("nli: empty premise or hypothesis");
  }
  const Url url = split_url(config_.endpoint);
  const json body = {{"premise", std::string(premise)},
                     {"hypothesis", std::string(hypothesis)}};
  auto res = post_json(url.scheme_host_port, url.path + (url.path.ends_with('/') ? "nli" : "/nli"), {},
                       body.dump(), config_.timeout);
  if (!res) {
    throw TransportError("NLI sidecar unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("NLI sidecar returned HTTP " +
                         std::to_string(res->status));
  }
  return parse_nli_response(res->body);
}

}  // namespace uj::clients
