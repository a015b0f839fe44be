#include "hdlrt/csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hdlrt/error.hpp"

namespace hdlrt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::optional<double> to_number(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), last, value);
  if (field.empty() || ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

}  // namespace

DataMatrix parse_csv_text(std::string_view text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first_content_line = true;

  while (!text.empty()) {
    const auto newline = text.find('\n');
    const auto line = trim(text.substr(0, newline));
    text.remove_prefix(newline == std::string_view::npos ? text.size() : newline + 1);
    ++line_no;
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (first_content_line) {
      first_content_line = false;
      bool numeric = true;
      for (auto f : fields) numeric = numeric && to_number(f).has_value();
      if (!numeric) {
        cols = fields.size();
        continue;  // header
      }
    }
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw Error(ErrorCode::RaggedRows, "row " + std::to_string(line_no) + " has " +
                                             std::to_string(fields.size()) + " fields, expected " +
                                             std::to_string(cols));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = to_number(fields[c]);
      if (!v) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(line_no) + ", column " +
                                               std::to_string(c + 1) + ": '" +
                                               std::string(fields[c]) + "' is not a number");
      }
      values.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::ParseError, "CSV input contains no data rows");
  try {
    return DataMatrix(rows, cols, std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

DataMatrix parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "failed reading '" + path.string() + "'");
  return parse_csv_text(buffer.str());
}

}  // namespace hdlrt
