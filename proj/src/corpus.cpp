#include "readbench/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "readbench/assets.hpp"
#include "readbench/csv.hpp"
#include "readbench/error.hpp"

namespace readbench {

using nlohmann::json;

LabelType parse_label_type(std::string_view s) {
  if (s == "none") return LabelType::None;
  if (s == "ordinal" || s == "categorical") return LabelType::Ordinal;
  if (s == "continuous") return LabelType::Continuous;
  throw ConfigError("unknown label_type '" + std::string(s) + "'");
}

std::string_view to_string(LabelType t) {
  switch (t) {
    case LabelType::None: return "none";
    case LabelType::Ordinal: return "ordinal";
    case LabelType::Continuous: return "continuous";
  }
  return "none";
}

std::vector<double> Corpus::gold_values() const {
  std::vector<double> out;
  out.reserve(documents.size());
  for (const auto& d : documents) {
    if (const auto* s = std::get_if<std::string>(&d.gold)) {
      if (!scale) throw DataError("corpus '" + name + "' has ordinal labels but no scale");
      out.push_back(scale->index_of(*s));
    } else if (const auto* v = std::get_if<double>(&d.gold)) {
      out.push_back(*v);
    } else {
      throw DataError("document '" + d.id + "' in corpus '" + name + "' has no gold label");
    }
  }
  return out;
}

void CorpusSpec::validate() const {
  if (text_fields.empty()) throw ConfigError("corpus '" + name + "': no text fields");
  if (label_type == LabelType::Ordinal && !scale) throw ConfigError("corpus '" + name + "': ordinal labels need a scale");
  if (label_type != LabelType::None && label_field.empty()) throw ConfigError("corpus '" + name + "': no label field");
}

namespace {

const json& presets() {
  static const json p = json::parse(assets::get("presets.json"));
  return p;
}

void apply_spec_json(CorpusSpec& spec, const json& j, const std::filesystem::path& base_dir) {
  if (j.contains("path")) {
    std::filesystem::path p = j.at("path").get<std::string>();
    spec.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (j.contains("format")) {
    const auto f = j.at("format").get<std::string>();
    if (f == "jsonl") {
      spec.format = CorpusFormat::Jsonl;
    } else if (f == "csv") {
      spec.format = CorpusFormat::Csv;
    } else {
      throw ConfigError("unknown corpus format '" + f + "'");
    }
  }
  if (j.contains("id_field")) spec.id_field = j.at("id_field").get<std::string>();
  if (j.contains("text_field")) spec.text_fields = {{j.at("text_field").get<std::string>(), ""}};
  if (j.contains("text_fields")) {
    spec.text_fields.clear();
    for (const auto& f : j.at("text_fields")) {
      if (f.is_string()) {
        spec.text_fields.push_back({f.get<std::string>(), ""});
      } else {
        spec.text_fields.push_back({f.at("field").get<std::string>(), f.value("prefix", std::string{})});
      }
    }
  }
  if (j.contains("label_field")) spec.label_field = j.at("label_field").get<std::string>();
  if (j.contains("label_type")) spec.label_type = parse_label_type(j.at("label_type").get<std::string>());
  if (j.contains("scale")) spec.scale = OrdinalScale(j.at("scale").get<std::vector<std::string>>());
  if (spec.label_type != LabelType::Ordinal) spec.scale.reset();
}

std::optional<std::string> scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return std::nullopt;
}

Document make_document(const CorpusSpec& spec, const json& rec, std::size_t record_no, std::size_t line) {
  if (!rec.is_object()) throw DataError("record is not an object", line);
  Document doc;
  if (auto it = rec.find(spec.id_field); it != rec.end() && !it->is_null()) {
    auto id = scalar_text(*it);
    if (!id) throw DataError("field '" + spec.id_field + "' is not a scalar", line);
    doc.id = *id;
  } else {
    doc.id = std::to_string(record_no);
  }

  std::string text;
  bool any = false;
  for (const auto& f : spec.text_fields) {
    auto it = rec.find(f.field);
    if (it == rec.end() || it->is_null()) continue;
    auto value = scalar_text(*it);
    if (!value) throw DataError("field '" + f.field + "' is not text", line);
    if (value->empty()) continue;
    if (any) text += '\n';
    text += f.prefix + *value;
    any = true;
  }
  if (!any) throw DataError("record has none of the text fields", line);
  doc.text = std::move(text);

  if (spec.label_type != LabelType::None) {
    auto it = rec.find(spec.label_field);
    if (it == rec.end() || it->is_null()) throw DataError("missing label field '" + spec.label_field + "'", line);
    if (spec.label_type == LabelType::Ordinal) {
      auto label = scalar_text(*it);
      if (!label) throw DataError("label is not a scalar", line);
      if (!spec.scale->contains(*label)) throw DataError("label '" + *label + "' is not in the scale", line);
      doc.gold = *label;
    } else {
      double v = 0;
      if (it->is_number()) {
        v = it->get<double>();
      } else if (it->is_string()) {
        const auto s = it->get<std::string>();
        std::size_t used = 0;
        try {
          v = std::stod(s, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != s.size()) throw DataError("label '" + s + "' is not a number", line);
      } else {
        throw DataError("label is not a number", line);
      }
      if (!std::isfinite(v)) throw DataError("label is not finite", line);
      doc.gold = v;
    }
  }

  std::set<std::string> used{spec.id_field, spec.label_field};
  for (const auto& f : spec.text_fields) used.insert(f.field);
  for (auto it = rec.begin(); it != rec.end(); ++it) {
    if (used.contains(it.key())) continue;
    if (it.key() == "metadata" && it->is_object()) {
      for (auto m = it->begin(); m != it->end(); ++m) {
        if (auto s = scalar_text(*m)) doc.metadata[m.key()] = *s;
      }
    } else if (auto s = scalar_text(*it)) {
      doc.metadata[it.key()] = *s;
    }
  }
  return doc;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (auto it = presets().begin(); it != presets().end(); ++it) out.push_back(it.key());
  return out;
}

CorpusSpec preset_spec(std::string_view preset, std::filesystem::path path) {
  auto it = presets().find(std::string(preset));
  if (it == presets().end()) throw ConfigError("unknown corpus preset '" + std::string(preset) + "'");
  CorpusSpec spec;
  spec.name = std::string(preset);
  apply_spec_json(spec, *it, {});
  spec.path = std::move(path);
  return spec;
}

CorpusSpec corpus_spec_from_json(std::string_view name, std::string_view json_text,
                                 const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("corpus spec: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("corpus spec '" + std::string(name) + "' is not an object");
  static const std::set<std::string> known{"preset",      "path",       "format",     "id_field", "text_fields",
                                           "text_field",  "label_field", "label_type", "scale"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("corpus spec '" + std::string(name) + "': unknown key '" + key + "'");
  }
  CorpusSpec spec;
  if (j.contains("preset")) spec = preset_spec(j.at("preset").get<std::string>());
  spec.name = std::string(name);
  try {
    apply_spec_json(spec, j, base_dir);
  } catch (const json::exception& e) {
    throw ConfigError("corpus spec '" + spec.name + "': " + e.what());
  }
  spec.validate();
  return spec;
}

Corpus parse_corpus(const CorpusSpec& spec, std::string_view content) {
  spec.validate();
  Corpus corpus;
  corpus.name = spec.name;
  corpus.label_type = spec.label_type;
  corpus.scale = spec.scale;
  std::set<std::string> ids;
  auto add = [&](Document doc, std::size_t line) {
    if (!ids.insert(doc.id).second) throw DataError("duplicate document id '" + doc.id + "'", line);
    corpus.documents.push_back(std::move(doc));
  };

  if (spec.format == CorpusFormat::Jsonl) {
    std::size_t line_no = 0;
    std::size_t record_no = 0;
    while (!content.empty()) {
      const auto nl = content.find('\n');
      std::string_view line = content.substr(0, nl);
      content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::exception&) {
        throw DataError("malformed JSON record", line_no);
      }
      add(make_document(spec, rec, ++record_no, line_no), line_no);
    }
  } else {
    const CsvTable table = parse_csv(content);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      const std::size_t line = table.row_lines[r];
      if (row.size() != table.header.size()) throw DataError("wrong number of CSV fields", line);
      json rec = json::object();
      for (std::size_t c = 0; c < row.size(); ++c) rec[table.header[c]] = row[c];
      add(make_document(spec, rec, r + 1, line), line);
    }
  }
  if (corpus.documents.empty()) throw DataError("corpus '" + spec.name + "' is empty");
  return corpus;
}

Corpus load_corpus(const CorpusSpec& spec) {
  if (spec.path.empty()) throw ConfigError("corpus '" + spec.name + "' has no path");
  return parse_corpus(spec, read_text_file(spec.path));
}

std::string serialize_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents) {
    json j = json::object();
    j["id"] = d.id;
    j["text"] = d.text;
    if (const auto* s = std::get_if<std::string>(&d.gold)) j["label"] = *s;
    if (const auto* v = std::get_if<double>(&d.gold)) j["label"] = *v;
    if (!d.metadata.empty()) j["metadata"] = d.metadata;
    out += j.dump();
    out += '\n';
  }
  return out;
}

CorpusSpec generic_spec(const Corpus& corpus, std::filesystem::path path) {
  CorpusSpec spec;
  spec.name = corpus.name;
  spec.path = std::move(path);
  spec.label_type = corpus.label_type;
  spec.scale = corpus.scale;
  return spec;
}

std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound == 0) throw ConfigError("bounded_draw: zero bound");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t excess = (max % bound + 1) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = engine();
    if (excess == 0 || x <= max - excess) return x % bound;
  }
}

Quartiles quartiles(std::vector<double> v) {
  if (v.empty()) throw DataError("quartiles of an empty sample");
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double h = (static_cast<double>(v.size()) - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  Quartiles out;
  out.min = v.front();
  out.max = v.back();
  out.q1 = q(0.25);
  out.median = q(0.5);
  out.q3 = q(0.75);
  double sum = 0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  return out;
}

CorpusSummary corpus_stats(const Corpus& corpus, const std::vector<TextStats>& per_doc) {
  if (corpus.documents.empty()) throw DataError("corpus_stats: empty corpus");
  if (per_doc.size() != corpus.documents.size()) throw DataError("corpus_stats: stats/document count mismatch");
  CorpusSummary s;
  s.name = corpus.name;
  s.size = corpus.size();
  s.label_type = corpus.label_type;
  double words = 0, sentences = 0;
  for (const auto& st : per_doc) {
    words += static_cast<double>(st.n_words);
    sentences += static_cast<double>(st.n_sentences);
  }
  s.avg_words = words / static_cast<double>(s.size);
  s.avg_sentences = sentences / static_cast<double>(s.size);

  if (corpus.label_type == LabelType::Ordinal && corpus.scale) {
    for (const auto& label : corpus.scale->labels()) {
      std::vector<double> w, n;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto* g = std::get_if<std::string>(&corpus.documents[i].gold);
        if (g && *g == label) {
          w.push_back(static_cast<double>(per_doc[i].n_words));
          n.push_back(static_cast<double>(per_doc[i].n_sentences));
        }
      }
      if (w.empty()) continue;
      s.per_label.push_back({label, w.size(), quartiles(w), quartiles(n)});
    }
  }
  return s;
}

CorpusSummary corpus_stats(const Corpus& corpus, const Lexicon& lexicon) {
  if (corpus.documents.empty()) throw DataError("corpus_stats: empty corpus");
  std::vector<TextStats> per_doc;
  per_doc.reserve(corpus.size());
  for (const auto& d : corpus.documents) per_doc.push_back(compute_stats(d.text, lexicon));
  return corpus_stats(corpus, per_doc);
}

std::string summaries_to_csv(const std::vector<CorpusSummary>& summaries) {
  CsvWriter w;
  w.row({"dataset", "label", "size", "label_type", "avg_words", "avg_sentences", "words_min", "words_q1",
         "words_median", "words_q3", "words_max", "sentences_min", "sentences_q1", "sentences_median",
         "sentences_q3", "sentences_max"});
  auto f = [](double v) { return fmt::format("{:.2f}", v); };
  for (const auto& s : summaries) {
    w.row({s.name, "*", std::to_string(s.size), std::string(to_string(s.label_type)), f(s.avg_words),
           f(s.avg_sentences), "", "", "", "", "", "", "", "", "", ""});
    for (const auto& l : s.per_label) {
      w.row({s.name, l.label, std::to_string(l.count), std::string(to_string(s.label_type)), f(l.words.mean),
             f(l.sentences.mean), f(l.words.min), f(l.words.q1), f(l.words.median), f(l.words.q3), f(l.words.max),
             f(l.sentences.min), f(l.sentences.q1), f(l.sentences.median), f(l.sentences.q3), f(l.sentences.max)});
    }
  }
  return w.str();
}

std::string summaries_to_markdown(const std::vector<CorpusSummary>& summaries) {
  std::string out = "| Dataset | Size | Label Type | Avg. #Words | Avg. #Sents |\n|---|---:|---|---:|---:|\n";
  for (const auto& s : summaries) {
    out += fmt::format("| {} | {} | {} | {:.2f} | {:.2f} |\n", s.name, s.size, to_string(s.label_type), s.avg_words,
                       s.avg_sentences);
  }
  bool any = false;
  for (const auto& s : summaries) any = any || !s.per_label.empty();
  if (!any) return out;
  out += "\n#### Length by label (min / Q1 / median / Q3 / max)\n\n";
  out += "| Dataset | Label | n | #Words | #Sentences |\n|---|---|---:|---|---|\n";
  for (const auto& s : summaries) {
    for (const auto& l : s.per_label) {
      out += fmt::format("| {} | {} | {} | {:g} / {:g} / {:g} / {:g} / {:g} | {:g} / {:g} / {:g} / {:g} / {:g} |\n",
                         s.name, l.label, l.count, l.words.min, l.words.q1, l.words.median, l.words.q3, l.words.max,
                         l.sentences.min, l.sentences.q1, l.sentences.median, l.sentences.q3, l.sentences.max);
    }
  }
  return out;
}

}  // namespace readbench
