#include <algorithm>
#include <array>
#include <cctype>
#include <regex>

#include "json.hpp"
#include "readbench/assets.hpp"
#include "readbench/judge.hpp"

namespace readbench {

using nlohmann::json;

JudgeKind parse_judge_kind(std::string_view s) {
  if (s == "categorical-0shot") return JudgeKind::Categorical0Shot;
  if (s == "categorical-5shot") return JudgeKind::Categorical5Shot;
  if (s == "continuous-0-100") return JudgeKind::Continuous;
  throw ConfigError("unknown judge variant '" + std::string(s) + "'");
}

std::string_view to_string(JudgeKind kind) {
  switch (kind) {
    case JudgeKind::Categorical0Shot: return "categorical-0shot";
    case JudgeKind::Categorical5Shot: return "categorical-5shot";
    case JudgeKind::Continuous: return "continuous-0-100";
  }
  return "";
}

JudgeVariant JudgeVariant::make(JudgeKind kind) {
  return {kind, kind == JudgeKind::Continuous ? 3 : 20, 0.0};
}

void JudgeVariant::validate() const {
  if (temperature != 0.0) throw ConfigError("judge variants use greedy decoding (temperature 0)");
  const int expected = kind == JudgeKind::Continuous ? 3 : 20;
  if (max_output_tokens != expected) {
    throw ConfigError(std::string(to_string(kind)) + " expects max_output_tokens=" + std::to_string(expected));
  }
}

std::string ChatRequest::to_json() const {
  json j;
  j["model"] = model_name;
  j["temperature"] = temperature;
  j["max_tokens"] = max_tokens;
  j["messages"] = json::array();
  for (const auto& m : messages) j["messages"].push_back({{"role", m.role}, {"content", m.content}});
  return j.dump();
}

PromptTemplate PromptTemplate::from_json(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    PromptTemplate t;
    t.version = j.value("version", std::string{});
    for (const auto& m : j.at("messages")) {
      const auto role = m.at("role").get<std::string>();
      if (role != "system" && role != "user") throw ConfigError("prompt template: unsupported role '" + role + "'");
      t.messages.push_back({role, m.at("content").get<std::string>()});
    }
    t.example_format = j.value("example_format", std::string{});
    if (t.messages.empty()) throw ConfigError("prompt template has no messages");
    return t;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("prompt template: ") + e.what());
  }
}

const PromptTemplate& PromptTemplate::builtin(JudgeKind kind) {
  static const std::array<PromptTemplate, 3> templates = {
      PromptTemplate::from_json(assets::get("prompts/categorical_0shot.json")),
      PromptTemplate::from_json(assets::get("prompts/categorical_5shot.json")),
      PromptTemplate::from_json(assets::get("prompts/continuous_0_100.json")),
  };
  return templates[static_cast<std::size_t>(kind)];
}

std::vector<Exemplar> exemplars_from_json(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    std::vector<Exemplar> out;
    for (const auto& e : j.at("examples")) out.push_back({e.at("label").get<std::string>(), e.at("text").get<std::string>()});
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("exemplars: ") + e.what());
  }
}

const std::vector<Exemplar>& builtin_exemplars() {
  static const std::vector<Exemplar> shots = exemplars_from_json(assets::get("prompts/five_shot_examples.json"));
  return shots;
}

namespace {

// Replaces {{name}} placeholders in one left-to-right pass; unknown
// placeholders are copied unchanged.
std::string substitute(std::string_view tmpl, const std::vector<std::pair<std::string_view, std::string_view>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    out.append(tmpl.substr(pos, open - pos));
    bool replaced = false;
    for (const auto& [name, value] : values) {
      const auto len = name.size();
      if (tmpl.substr(open + 2, len) == name && tmpl.substr(open + 2 + len, 2) == "}}") {
        out.append(value);
        pos = open + 4 + len;
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.append("{{");
      pos = open + 2;
    }
  }
  out.append(tmpl.substr(std::min(pos, tmpl.size())));
  return out;
}

void check_shots(const JudgeVariant& variant, std::span<const Exemplar> shots) {
  if (variant.kind != JudgeKind::Categorical5Shot) {
    if (!shots.empty()) throw ConfigError(std::string(to_string(variant.kind)) + " takes no exemplars");
    return;
  }
  if (shots.size() != 5) {
    throw ConfigError("categorical-5shot needs exactly 5 exemplars, got " + std::to_string(shots.size()));
  }
  auto count = [&](std::string_view label) {
    return std::count_if(shots.begin(), shots.end(), [&](const Exemplar& e) { return e.label == label; });
  };
  if (count("Elementary") != 2 || count("Graduate") != 2 || count("High School") != 1) {
    throw ConfigError("categorical-5shot exemplars must be two Elementary, two Graduate and one High School");
  }
}

}  // namespace

ChatRequest build_prompt(const JudgeVariant& variant, std::string_view text, std::span<const Exemplar> shots,
                         std::string_view model, const PromptTemplate& tmpl) {
  variant.validate();
  check_shots(variant, shots);
  std::string examples;
  for (const auto& shot : shots) examples += substitute(tmpl.example_format, {{"text", shot.text}, {"label", shot.label}});

  ChatRequest req;
  req.model_name = std::string(model);
  req.temperature = variant.temperature;
  req.max_tokens = variant.max_output_tokens;
  for (const auto& m : tmpl.messages) {
    req.messages.push_back({m.role, substitute(m.content, {{"text", text}, {"examples", examples}})});
  }
  return req;
}

ChatRequest build_prompt(const JudgeVariant& variant, std::string_view text, std::span<const Exemplar> shots,
                         std::string_view model) {
  return build_prompt(variant, text, shots, model, PromptTemplate::builtin(variant.kind));
}

Judgment parse_judgment(const JudgeVariant& variant, std::string_view completion) {
  Judgment j;
  j.kind = variant.kind;
  j.raw_completion = std::string(completion);
  if (variant.kind == JudgeKind::Continuous) {
    std::size_t i = 0;
    while (i < completion.size()) {
      if (!std::isdigit(static_cast<unsigned char>(completion[i]))) {
        ++i;
        continue;
      }
      std::size_t e = i;
      while (e < completion.size() && std::isdigit(static_cast<unsigned char>(completion[e]))) ++e;
      const std::string_view digits = completion.substr(i, e - i);
      if (digits.size() <= 3) {
        const int v = std::stoi(std::string(digits));
        if (v >= 1 && v <= 100) {
          j.value = v;
          return j;
        }
      }
      i = e;
    }
    throw UnparseableCompletionError("no score between 1 and 100 in completion: '" + std::string(completion) + "'");
  }

  static const std::regex label_re(R"(elementary|high[\s_-]*school|graduate)", std::regex::icase);
  std::cmatch m;
  if (!std::regex_search(completion.data(), completion.data() + completion.size(), m, label_re)) {
    throw UnparseableCompletionError("no readability label in completion: '" + std::string(completion) + "'");
  }
  const char first = static_cast<char>(std::tolower(static_cast<unsigned char>(m.str(0)[0])));
  j.value = first == 'e' ? 0 : first == 'h' ? 1 : 2;
  return j;
}

}  // namespace readbench
