#include <algorithm>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "readbench/hashing.hpp"
#include "readbench/judge.hpp"
#include "readbench/lexicon.hpp"

namespace readbench {

using nlohmann::json;

std::chrono::milliseconds RetryPolicy::backoff(int retry_index) const {
  double ms = static_cast<double>(initial_backoff.count());
  for (int i = 0; i < retry_index; ++i) ms *= multiplier;
  return std::min(std::chrono::milliseconds(static_cast<long long>(ms)), max_backoff);
}

JudgeCache::JudgeCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  const std::string content = read_text_file(path_);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    const std::string_view line(content.data() + pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const json j = json::parse(line);
      entries_[j.at("key").get<std::string>()] = j.at("completion").get<std::string>();
    } catch (const json::exception&) {
      throw DataError("malformed judge cache entry in " + path_.string(), line_no);
    }
  }
}

std::string JudgeCache::key(const JudgeVariant& variant, std::string_view template_version, std::string_view model,
                            std::string_view document_text) {
  std::string material;
  material += to_string(variant.kind);
  material += '\n';
  material += template_version;
  material += '\n';
  material += model;
  material += '\n';
  material += sha256_hex(document_text);
  return sha256_hex(material);
}

std::optional<std::string> JudgeCache::lookup(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void JudgeCache::store(const std::string& key, std::string_view completion) {
  std::lock_guard lock(mutex_);
  if (!entries_.emplace(key, std::string(completion)).second) return;
  if (path_.empty()) return;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw DataError("cannot write judge cache " + path_.string());
  out << json{{"key", key}, {"completion", completion}}.dump() << '\n';
}

std::size_t JudgeCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<std::string> JudgeRun::failed_ids() const {
  std::vector<std::string> out;
  for (const auto& o : outcomes) {
    if (!o.judgment) out.push_back(o.document_id);
  }
  return out;
}

void JudgeRun::throw_if_incomplete() const {
  auto failed = failed_ids();
  if (!failed.empty()) throw PartialResultError(std::move(failed));
}

namespace {
std::string join_ids(const std::vector<std::string>& ids) {
  std::string s;
  for (const auto& id : ids) {
    if (!s.empty()) s += ", ";
    s += id;
  }
  return s;
}
}  // namespace

PartialResultError::PartialResultError(std::vector<std::string> failed)
    : Error("judge failed for " + std::to_string(failed.size()) + " document(s): " + join_ids(failed)),
      failed_(std::move(failed)) {}

JudgeRun judge_corpus(const Corpus& corpus, ChatEndpoint* endpoint, const JudgeVariant& variant,
                      const JudgeOptions& options) {
  variant.validate();
  const PromptTemplate& tmpl = options.tmpl ? *options.tmpl : PromptTemplate::builtin(variant.kind);
  std::vector<Exemplar> shots = options.shots;
  if (variant.kind == JudgeKind::Categorical5Shot && shots.empty()) shots = builtin_exemplars();
  // Validates the shot configuration once, before any request.
  (void)build_prompt(variant, "", shots, options.model, tmpl);

  const std::size_t n = corpus.size();
  JudgeRun run;
  run.outcomes.resize(n);

  std::mutex log_mutex;
  auto log = [&](const std::string& msg) {
    if (!options.log) return;
    std::lock_guard lock(log_mutex);
    options.log(msg);
  };
  auto sleep = [&](std::chrono::milliseconds d) {
    if (options.sleep) {
      options.sleep(d);
    } else {
      std::this_thread::sleep_for(d);
    }
  };

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> network_calls{0};
  std::atomic<std::size_t> retries{0};
  std::atomic<std::size_t> cache_hits{0};

  auto judge_one = [&](std::size_t i) {
    const Document& doc = corpus.documents[i];
    JudgeOutcome& out = run.outcomes[i];
    out.document_id = doc.id;
    const std::string key = JudgeCache::key(variant, tmpl.version, options.model, doc.text);

    std::optional<std::string> completion;
    if (options.cache) completion = options.cache->lookup(key);
    if (completion) {
      out.from_cache = true;
      ++cache_hits;
    } else {
      if (!endpoint) {
        out.error = "no endpoint configured and no cached completion";
        return;
      }
      const ChatRequest req = build_prompt(variant, doc.text, shots, options.model, tmpl);
      for (int attempt = 0; attempt < std::max(options.retry.max_attempts, 1); ++attempt) {
        if (options.max_total_requests > 0 && network_calls.fetch_add(1) >= options.max_total_requests) {
          out.error = "request budget exhausted";
          return;
        }
        if (options.max_total_requests == 0) ++network_calls;
        ++out.attempts;
        try {
          completion = endpoint->complete(req);
          break;
        } catch (const EndpointError& e) {
          out.error = e.what();
          if (!is_retryable_status(e.status()) || attempt + 1 >= options.retry.max_attempts) break;
          ++retries;
          const auto wait = options.retry.backoff(attempt);
          log("retry " + std::to_string(attempt + 1) + " for document '" + doc.id + "' after " +
              std::to_string(wait.count()) + " ms: " + e.what());
          sleep(wait);
        }
      }
      if (!completion) {
        log("document '" + doc.id + "' failed: " + out.error);
        return;
      }
      if (options.cache) options.cache->store(key, *completion);
    }

    try {
      out.judgment = parse_judgment(variant, *completion);
      out.error.clear();
    } catch (const UnparseableCompletionError& e) {
      out.error = e.what();
      log("document '" + doc.id + "': " + out.error);
    }
  };

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        judge_one(i);
      } catch (const std::exception& e) {
        run.outcomes[i].document_id = corpus.documents[i].id;
        run.outcomes[i].judgment.reset();
        run.outcomes[i].error = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.concurrency_limit, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  run.network_calls = options.max_total_requests > 0
                          ? std::min(network_calls.load(), options.max_total_requests)
                          : network_calls.load();
  run.retries = retries.load();
  run.cache_hits = cache_hits.load();
  return run;
}

}  // namespace readbench
