#include "readbench/csv.hpp"

#include <charconv>

#include "readbench/error.hpp"

namespace readbench {

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable parse_csv(std::string_view in, const CsvOptions& options) {
  CsvTable table;
  std::size_t pos = 0;
  std::size_t line = 1;
  bool have_header = false;
  if (in.starts_with("\xEF\xBB\xBF")) pos = 3;

  while (pos < in.size()) {
    const bool at_line_start = pos == 0 || in[pos - 1] == '\n' || (pos == 3 && in.starts_with("\xEF\xBB\xBF"));
    if (at_line_start && options.comment_prefix && in[pos] == *options.comment_prefix) {
      const auto nl = in.find('\n', pos);
      pos = nl == std::string_view::npos ? in.size() : nl + 1;
      ++line;
      continue;
    }
    if (in[pos] == '\n' || (in[pos] == '\r' && pos + 1 < in.size() && in[pos + 1] == '\n')) {
      pos += in[pos] == '\r' ? 2 : 1;
      ++line;
      continue;
    }

    const std::size_t record_line = line;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    for (;;) {
      if (pos >= in.size()) {
        if (quoted) throw DataError("unterminated quoted field", record_line);
        fields.push_back(std::move(field));
        break;
      }
      const char c = in[pos];
      if (quoted) {
        if (c == '"') {
          if (pos + 1 < in.size() && in[pos + 1] == '"') {
            field.push_back('"');
            pos += 2;
          } else {
            quoted = false;
            ++pos;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++pos;
        }
        continue;
      }
      if (c == '"' && field.empty() && !field_was_quoted) {
        quoted = true;
        field_was_quoted = true;
        ++pos;
      } else if (c == options.delimiter) {
        fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        ++pos;
      } else if (c == '\n' || (c == '\r' && pos + 1 < in.size() && in[pos + 1] == '\n')) {
        pos += c == '\r' ? 2 : 1;
        ++line;
        fields.push_back(std::move(field));
        break;
      } else {
        field.push_back(c);
        ++pos;
      }
    }

    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back(std::move(fields));
      table.row_lines.push_back(record_line);
    }
  }
  return table;
}

std::string csv_escape(std::string_view field, char delimiter) {
  const bool needs = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos ||
                     (!field.empty() && field.front() == '#');
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void CsvWriter::row(std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_escape(fields[i]);
  }
  out_ << '\n';
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace readbench
