#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "claimrep/types.hpp"

namespace claimrep {

// Minimal RFC-4180-ish reader: handles quoted fields with embedded commas
// and doubled quotes. One record per line (no embedded newlines).
class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, char delimiter = ',');

  // Returns false at end of file; fields are overwritten in place.
  bool next(std::vector<std::string>& fields);

  std::size_t line_number() const { return line_; }
  const std::filesystem::path& path() const { return path_; }

  // Error with "file:line[:column]" prefix.
  [[noreturn]] void fail(std::string_view what, std::size_t column = 0) const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  char delim_;
  std::size_t line_ = 0;
};

void split_csv_line(std::string_view line, char delim,
                    std::vector<std::string>& out);

// Shortest round-trip decimal representation (std::to_chars), so emitted
// artifacts are byte-stable across runs.
std::string format_double(double v);

// Strict double parse of a whole field.
double parse_double_field(const CsvReader& reader, std::string_view field,
                          std::string_view column_name);

std::string csv_escape(std::string_view field, char delim = ',');

}  // namespace claimrep
