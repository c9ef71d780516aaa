#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "readbench/corpus.hpp"
#include "readbench/error.hpp"

namespace readbench {

enum class JudgeKind { Categorical0Shot, Categorical5Shot, Continuous };

JudgeKind parse_judge_kind(std::string_view s);  // "categorical-0shot", "categorical-5shot", "continuous-0-100"
std::string_view to_string(JudgeKind kind);

/// Decoding contract of a judge variant: greedy decoding, 20 output tokens for
/// the categorical prompts and 3 for the continuous score.
struct JudgeVariant {
  JudgeKind kind = JudgeKind::Categorical0Shot;
  int max_output_tokens = 20;
  double temperature = 0.0;

  static JudgeVariant make(JudgeKind kind);
  /// Throws ConfigError if the decoding parameters differ from the contract above.
  void validate() const;

  bool operator==(const JudgeVariant&) const = default;
};

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string model_name;
  double temperature = 0.0;
  int max_tokens = 0;

  /// Wire body {model, messages, temperature, max_tokens}, keys sorted.
  std::string to_json() const;

  bool operator==(const ChatRequest&) const = default;
};

/// A labeled exemplar for the 5-shot prompt.
struct Exemplar {
  std::string label;  // Elementary, High School or Graduate
  std::string text;
};

/// Message templates with {{text}} (and {{examples}} for 5-shot) placeholders.
struct PromptTemplate {
  std::string version;
  std::vector<ChatMessage> messages;
  std::string example_format;  // per-exemplar block with {{text}} and {{label}}

  static PromptTemplate from_json(std::string_view json_text);
  static const PromptTemplate& builtin(JudgeKind kind);
};

/// The five exemplars shipped with the library (two Elementary, two Graduate,
/// one High School).
const std::vector<Exemplar>& builtin_exemplars();
std::vector<Exemplar> exemplars_from_json(std::string_view json_text);

/// Instantiates the template for `variant`. The 5-shot variant needs exactly
/// five exemplars (two Elementary, two Graduate, one High School); the other
/// variants take none. Throws ConfigError otherwise. Placeholders are replaced
/// in a single pass, so text containing "{{text}}" is inserted verbatim.
ChatRequest build_prompt(const JudgeVariant& variant, std::string_view text, std::span<const Exemplar> shots,
                         std::string_view model, const PromptTemplate& tmpl);
ChatRequest build_prompt(const JudgeVariant& variant, std::string_view text, std::span<const Exemplar> shots = {},
                         std::string_view model = {});

struct Judgment {
  JudgeKind kind = JudgeKind::Categorical0Shot;
  int value = 0;  // label index 0..2 for categorical, score 1..100 for continuous
  std::string raw_completion;

  bool operator==(const Judgment&) const = default;
};

/// Continuous: first integer in 1..100. Categorical: earliest case-insensitive
/// mention of Elementary, High School or Graduate. Throws UnparseableCompletionError.
Judgment parse_judgment(const JudgeVariant& variant, std::string_view completion);

/// A chat-completions backend. Implementations must be safe to call from
/// several threads.
class ChatEndpoint {
 public:
  virtual ~ChatEndpoint() = default;
  /// Returns choices[0].message.content. Throws EndpointError.
  virtual std::string complete(const ChatRequest& request) = 0;
};

inline constexpr const char* kApiKeyEnv = "READBENCH_API_KEY";

/// POSTs to {base_url}/v1/chat/completions with a bearer token.
class HttpChatEndpoint : public ChatEndpoint {
 public:
  HttpChatEndpoint(std::string base_url, std::string api_key,
                   std::chrono::seconds timeout = std::chrono::seconds(120));
  /// Reads the key from READBENCH_API_KEY; throws ConfigError when unset.
  static std::unique_ptr<HttpChatEndpoint> from_environment(std::string base_url);

  std::string complete(const ChatRequest& request) override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

/// Transport statuses worth retrying: connection failures, 408, 429 and 5xx.
bool is_retryable_status(int status);

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};

  std::chrono::milliseconds backoff(int retry_index) const;  // 0-based
};

/// Content-addressed JSON-lines cache of raw completions. Appends are
/// serialized; lookups are thread-safe.
class JudgeCache {
 public:
  /// Empty path keeps the cache in memory only.
  explicit JudgeCache(std::filesystem::path path = {});

  static std::string key(const JudgeVariant& variant, std::string_view template_version, std::string_view model,
                         std::string_view document_text);

  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, std::string_view completion);
  std::size_t size() const;

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::string> entries_;
};

struct JudgeOutcome {
  std::string document_id;
  std::optional<Judgment> judgment;
  std::string error;  // set when judgment is empty
  int attempts = 0;
  bool from_cache = false;
};

struct JudgeRun {
  std::vector<JudgeOutcome> outcomes;  // corpus order
  std::size_t network_calls = 0;
  std::size_t retries = 0;
  std::size_t cache_hits = 0;

  std::vector<std::string> failed_ids() const;
  /// Throws PartialResultError when any document failed.
  void throw_if_incomplete() const;
};

class PartialResultError : public Error {
 public:
  explicit PartialResultError(std::vector<std::string> failed);
  const std::vector<std::string>& failed_ids() const noexcept { return failed_; }

 private:
  std::vector<std::string> failed_;
};

struct JudgeOptions {
  std::string model;
  std::size_t concurrency_limit = 4;
  RetryPolicy retry;
  std::size_t max_total_requests = 0;  // 0 = unlimited
  JudgeCache* cache = nullptr;
  std::vector<Exemplar> shots;         // defaults to builtin_exemplars() for 5-shot
  const PromptTemplate* tmpl = nullptr;
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to std::this_thread::sleep_for
  std::function<void(std::string_view)> log;
};

/// Judges every document, up to `concurrency_limit` requests in flight.
/// Transport errors are retried with exponential backoff; unparseable
/// completions are marked failed without retry. With a warm cache no request
/// is sent. Needs no endpoint when every document is cached (`endpoint` may be null).
JudgeRun judge_corpus(const Corpus& corpus, ChatEndpoint* endpoint, const JudgeVariant& variant,
                      const JudgeOptions& options);

enum class AggregateMode { Mean, Max };

AggregateMode parse_aggregate_mode(std::string_view s);

/// Document score from per-sentence scores. Throws DataError on an empty list.
double aggregate_sentence_scores(std::span<const double> per_sentence, AggregateMode mode);

/// Scores produced outside this library (fine-tuned scorers). The CSV has
/// columns doc_id and score, plus an optional sentence_index column; when
/// present, sentence scores are aggregated per document with `mode`.
std::map<std::string, double> parse_external_scores(std::string_view csv, AggregateMode mode = AggregateMode::Mean);
std::map<std::string, double> read_external_scores(const std::filesystem::path& path,
                                                   AggregateMode mode = AggregateMode::Mean);

}  // namespace readbench
