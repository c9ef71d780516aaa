#pragma once

#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace readbench {

struct CsvOptions {
  char delimiter = ',';
  std::optional<char> comment_prefix;  // lines starting with this are skipped
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;  // 1-based line where each row starts

  /// Column index for `name`, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180 reader: quoted fields may hold delimiters, doubled quotes and
/// newlines. The first non-comment record is the header. Throws DataError on
/// an unterminated quote.
CsvTable parse_csv(std::string_view content, const CsvOptions& options = {});

std::string csv_escape(std::string_view field, char delimiter = ',');

class CsvWriter {
 public:
  void comment(std::string_view text) { out_ << "# " << text << '\n'; }
  void row(std::span<const std::string> fields);
  void row(std::initializer_list<std::string> fields) { row(std::span<const std::string>(fields.begin(), fields.size())); }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

/// Shortest representation that round-trips.
std::string format_double(double v);

}  // namespace readbench
