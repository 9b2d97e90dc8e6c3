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

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "uj/common.hpp"

namespace uj::clients {

// ---- errors ----

// Network failure, exhausted retries, unreachable sidecar.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Non-retryable 4xx or a missing credential.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class EmptyOutputError : public Error {
 public:
  using Error::Error;
};

// Strict mocks throw this for inputs they were not scripted for.
class UnscriptedError : public Error {
 public:
  using Error::Error;
};

// ---- chat ----

inline constexpr double kJudgeTemperature = 0.0;
inline constexpr double kFabricationTemperature = 0.7;

struct ChatRequest {
  std::optional<std::string> system_message;
  std::string user_message;
  double temperature = kJudgeTemperature;
  int max_output_tokens = 512;
  std::string model_name;
};

/// Throws ContractError on an empty user message or temperature outside
/// [0, 2].
void validate(const ChatRequest& request);

/// SHA-256 over the system and user messages. This is the key scripted mocks
/// and the request log use.
std::string prompt_hash(const ChatRequest& request);
std::string prompt_hash(std::string_view user_message);

struct TokenUsage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct ChatResponse {
  std::string text;
  std::optional<TokenUsage> token_usage;
  std::chrono::nanoseconds latency{0};
};

struct RequestLogEntry {
  std::uint64_t sequence = 0;
  std::string backend;
  std::string prompt_hash;
  int attempts = 0;
  bool ok = false;
  std::string error;
  std::chrono::steady_clock::time_point start;
  std::chrono::steady_clock::time_point end;

  int retries() const { return attempts > 0 ? attempts - 1 : 0; }
};

// Append-only, internally serialized.
class RequestLog {
 public:
  void append(RequestLogEntry entry);
  std::vector<RequestLogEntry> entries() const;
  std::size_t size() const;
  void clear();

  /// Largest number of entries whose [start, end) intervals overlap at one
  /// instant.
  std::size_t max_overlap() const;

  /// Line-delimited JSON without timing fields, sorted by prompt hash so the
  /// output does not depend on thread scheduling.
  std::string to_jsonl() const;

 private:
  mutable std::mutex mu_;
  std::vector<RequestLogEntry> entries_;
  std::uint64_t next_sequence_ = 0;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResponse chat(const ChatRequest& request) = 0;
  virtual RequestLog& log() = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::chrono::milliseconds backoff_cap{30000};
  // Uniform jitter added on top of each delay, as a fraction of it.
  double jitter_fraction = 0.25;
};

/// Delay before retry number `retry` (0-based), jitter included.
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry,
                                        Rng& rng);

struct HttpChatConfig {
  // Full URL of the chat-completions endpoint, e.g.
  // https://api.example.com/v1/chat/completions
  std::string endpoint;
  std::string model_name;
  // Name of the environment variable holding the bearer token. Empty means
  // no Authorization header (local servers).
  std::string api_key_env = "OPENAI_API_KEY";
  int parallelism = 4;
  RetryPolicy retry;
  std::chrono::seconds timeout{120};
};

/// Chat-completions JSON body for a request.
std::string chat_request_body(const ChatRequest& request,
                              std::string_view model_name);

/// Extracts choices[0].message.content and usage from a response body.
ChatResponse parse_chat_response_body(std::string_view body);

class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatConfig config);
  ~HttpChatClient() override;

  ChatResponse chat(const ChatRequest& request) override;
  RequestLog& log() override { return log_; }

 private:
  HttpChatConfig config_;
  std::string api_key_;
  std::counting_semaphore<> limiter_;
  std::mutex rng_mu_;
  Rng jitter_rng_;
  RequestLog log_;
};

// Responses keyed by prompt hash. A hash may map to a sequence; successive
// calls walk it and the last response repeats.
class ScriptedChatClient : public ChatClient {
 public:
  explicit ScriptedChatClient(bool strict = true) : strict_(strict) {}

  void script(const std::string& prompt_hash, std::string response);
  void script_sequence(const std::string& prompt_hash,
                       std::vector<std::string> responses);
  void script_prompt(std::string_view user_message, std::string response) {
    script(prompt_hash(user_message), std::move(response));
  }
  /// Used for unscripted prompts when not strict.
  void set_fallback(std::string response) { fallback_ = std::move(response); }

  /// Loads {"prompt_hash"|"prompt": ..., "response"|"responses": ...} lines.
  void load_script(std::string_view jsonl);

  ChatResponse chat(const ChatRequest& request) override;
  RequestLog& log() override { return log_; }

 private:
  bool strict_;
  std::optional<std::string> fallback_;
  std::mutex mu_;
  std::map<std::string, std::vector<std::string>> script_;
  std::map<std::string, std::size_t> cursor_;
  RequestLog log_;
};

// Wraps a response function as a client with logging, limiter and the
// empty-output rule. The oracle mocks are built on this.
class FunctionChatClient : public ChatClient {
 public:
  using Handler = std::function<std::string(const ChatRequest&)>;
  FunctionChatClient(std::string backend_name, Handler handler,
                     int parallelism = 1);

  ChatResponse chat(const ChatRequest& request) override;
  RequestLog& log() override { return log_; }

 private:
  std::string backend_name_;
  Handler handler_;
  std::counting_semaphore<> limiter_;
  RequestLog log_;
};

// ---- NER ----

enum class EntityCategory { Person, Date, Numeric, Organization, Location, Other };

inline constexpr std::array<EntityCategory, 5> kEntityCategories = {
    EntityCategory::Person, EntityCategory::Date, EntityCategory::Numeric,
    EntityCategory::Organization, EntityCategory::Location};

std::string_view to_string(EntityCategory category);
EntityCategory parse_entity_category(std::string_view s);

struct EntitySpan {
  std::string surface;
  EntityCategory category = EntityCategory::Other;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

// Native sidecar label -> category. Unknown labels map to Other.
class LabelMap {
 public:
  /// spaCy-style defaults: PERSON, DATE/TIME, CARDINAL/QUANTITY/..., ORG,
  /// GPE/LOC/FAC.
  static LabelMap defaults();

  void set(std::string label, EntityCategory category);
  /// Returns Other and records a warning for unmapped labels.
  EntityCategory map(std::string_view label) const;
  std::vector<std::string> warnings() const;

 private:
  struct Warnings {
    std::mutex mu;
    std::vector<std::string> items;
  };
  std::map<std::string, EntityCategory, std::less<>> table_;
  std::shared_ptr<Warnings> warnings_ = std::make_shared<Warnings>();
};

class NerClient {
 public:
  virtual ~NerClient() = default;
  /// Non-overlapping spans sorted by char_start. Throws ContractError on
  /// empty text.
  virtual std::vector<EntitySpan> ner(std::string_view text) = 0;
};

// Exact-surface gazetteer. At each position the longest matching surface
// wins; matches must sit on word boundaries.
class GazetteerNer : public NerClient {
 public:
  GazetteerNer() = default;
  GazetteerNer(std::map<std::string, EntityCategory> entries);
  void add(std::string surface, EntityCategory category);
  std::vector<EntitySpan> ner(std::string_view text) override;

 private:
  std::map<std::string, EntityCategory> entries_;
};

struct SidecarConfig {
  // Base URL, e.g. http://127.0.0.1:8000
  std::string endpoint;
  std::chrono::seconds timeout{60};
};

class HttpNerClient : public NerClient {
 public:
  HttpNerClient(SidecarConfig config, LabelMap labels = LabelMap::defaults());
  std::vector<EntitySpan> ner(std::string_view text) override;
  const LabelMap& labels() const { return labels_; }

 private:
  SidecarConfig config_;
  LabelMap labels_;
};

/// Decodes a /ner response body, mapping labels and normalizing span order.
std::vector<EntitySpan> parse_ner_response(std::string_view text,
                                           std::string_view body,
                                           const LabelMap& labels);

// ---- NLI ----

enum class NliLabel { Entailment, Contradiction, Neutral };

std::string_view to_string(NliLabel label);
NliLabel parse_nli_label(std::string_view s);

struct NliVerdict {
  NliLabel label = NliLabel::Neutral;
  // entailment, contradiction, neutral
  std::array<double, 3> scores{0.0, 0.0, 1.0};
};

/// Throws ContractError unless scores sum to 1 within 1e-6 and the argmax
/// agrees with the label.
void validate(const NliVerdict& verdict);
NliVerdict make_verdict(NliLabel label);

class NliClient {
 public:
  virtual ~NliClient() = default;
  virtual NliVerdict nli(std::string_view premise,
                         std::string_view hypothesis) = 0;
};

// Exact (premise, hypothesis) table. Untabled pairs: identical strings are
// Entailment; a hypothesis whose normalized text occurs inside the premise
// is Entailment when `containment_entails` is set; anything else goes to the
// default label, or throws UnscriptedError in strict mode.
class TableNli : public NliClient {
 public:
  TableNli() = default;
  void set(std::string premise, std::string hypothesis, NliVerdict verdict);
  void set_default(std::optional<NliLabel> label) { default_ = label; }
  void set_containment_entails(bool on) { containment_entails_ = on; }

  NliVerdict nli(std::string_view premise,
                 std::string_view hypothesis) override;

 private:
  std::mutex mu_;
  std::map<std::pair<std::string, std::string>, NliVerdict> table_;
  std::optional<NliLabel> default_;
  bool containment_entails_ = false;
};

class HttpNliClient : public NliClient {
 public:
  explicit HttpNliClient(SidecarConfig config);
  NliVerdict nli(std::string_view premise,
                 std::string_view hypothesis) override;

 private:
  SidecarConfig config_;
};

NliVerdict parse_nli_response(std::string_view body);

}  // namespace uj::clients
