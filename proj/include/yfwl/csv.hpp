#pragma once

#include "yfwl/model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace yfwl {

struct CsvOptions {
  // Kept as string labels instead of being parsed as numbers.
  std::optional<std::string> cluster_column;
  // Drop rows with empty / NA cells instead of rejecting the file.
  bool drop_missing = false;
  // When set, only these columns are parsed; the rest are ignored.
  // Each must exist in the header.
  std::optional<std::vector<std::string>> columns;
};

/// Splits one RFC-4180 record. `line` may hold embedded newlines when a
/// quoted field spans physical lines.
std::vector<std::string> split_csv_record(const std::string& line, long line_number);

Dataset read_csv(std::istream& in, const CsvOptions& options = {});
Dataset ingest_csv(const std::string& path, const CsvOptions& options = {});

}  // namespace yfwl
