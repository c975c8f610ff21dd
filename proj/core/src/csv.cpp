#include "claimrep/csv.hpp"

#include <array>
#include <charconv>
#include <system_error>

namespace claimrep {

CsvReader::CsvReader(const std::filesystem::path& path, char delimiter)
    : path_(path), in_(path), delim_(delimiter) {
  if (!in_) throw IngestError("cannot open " + path.string());
}

void CsvReader::fail(std::string_view what, std::size_t column) const {
  std::string msg = path_.string() + ":" + std::to_string(line_);
  if (column > 0) msg += ":" + std::to_string(column);
  msg += ": ";
  msg += what;
  throw IngestError(msg);
}

bool CsvReader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    split_csv_line(line, delim_, fields);
    return true;
  }
  return false;
}

void split_csv_line(std::string_view line, char delim,
                    std::vector<std::string>& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double_field(const CsvReader& reader, std::string_view field,
                          std::string_view column_name) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    reader.fail("malformed number in column '" + std::string(column_name) + "': '" +
                std::string(field) + "'");
  }
  return value;
}

std::string csv_escape(std::string_view field, char delim) {
  bool needs_quotes = false;
  for (char c : field) {
    if (c == delim || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace claimrep
