#include "yfwl/csv.hpp"

#include "yfwl/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>

namespace yfwl {

namespace {

Error parse_error(long line, long column, const std::string& what) {
  Error e(ErrorKind::ParseError,
          "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
  e.with_index(line).with_column(column);
  return e;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "." || cell == "NaN" || cell == "nan";
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Reads one logical record, joining physical lines while a quote is open.
bool next_record(std::istream& in, std::string& record, long& line_number) {
  record.clear();
  std::string physical;
  bool in_quotes = false;
  bool any = false;
  while (std::getline(in, physical)) {
    ++line_number;
    if (!physical.empty() && physical.back() == '\r') physical.pop_back();
    if (any) record += '\n';
    record += physical;
    any = true;
    for (char c : physical) {
      if (c == '"') in_quotes = !in_quotes;
    }
    if (!in_quotes) return true;
  }
  if (in_quotes) throw parse_error(line_number, 0, "unterminated quoted field");
  return any;
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line, long line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!trim(field).empty()) {
        throw parse_error(line_number, static_cast<long>(fields.size()) + 1,
                          "quote inside unquoted field");
      }
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw parse_error(line_number, static_cast<long>(fields.size()) + 1, "unterminated quote");
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

Dataset read_csv(std::istream& in, const CsvOptions& options) {
  long line_number = 0;
  std::string record;
  if (!next_record(in, record, line_number)) {
    throw Error(ErrorKind::EmptyFile, "no header row");
  }
  Dataset data;
  const auto header = split_csv_record(record, line_number);
  std::set<std::string> seen;
  std::optional<std::size_t> cluster_index;
  std::vector<std::size_t> numeric_index;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!seen.insert(header[j]).second) {
      throw Error(ErrorKind::DuplicateHeader, "column '" + header[j] + "' repeated");
    }
    if (options.cluster_column && header[j] == *options.cluster_column) {
      cluster_index = j;
    } else if (!options.columns || std::count(options.columns->begin(), options.columns->end(), header[j])) {
      numeric_index.push_back(j);
      data.column_names.push_back(header[j]);
    }
  }
  if (options.columns) {
    for (const auto& name : *options.columns) {
      if (!seen.count(name)) throw Error(ErrorKind::UnknownColumn, "no column '" + name + "'");
    }
  }
  if (options.cluster_column && !cluster_index) {
    throw Error(ErrorKind::UnknownColumn, "no cluster column '" + *options.cluster_column + "'");
  }

  std::vector<std::vector<double>> rows;
  while (next_record(in, record, line_number)) {
    if (trim(record).empty()) continue;
    const auto cells = split_csv_record(record, line_number);
    if (cells.size() != header.size()) {
      throw parse_error(line_number, static_cast<long>(cells.size()),
                        "expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(cells.size()));
    }
    bool missing = false;
    std::vector<double> row;
    row.reserve(numeric_index.size());
    for (std::size_t j : numeric_index) {
      const std::string& cell = cells[j];
      if (is_missing(cell)) {
        missing = true;
        row.push_back(0.0);
        continue;
      }
      double value = 0.0;
      const auto* begin = cell.data();
      const auto* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr != end) {
        throw parse_error(line_number, static_cast<long>(j) + 1, "'" + cell + "' is not a number");
      }
      row.push_back(value);
    }
    if (cluster_index && is_missing(cells[*cluster_index])) missing = true;
    if (missing) {
      if (!options.drop_missing) {
        throw Error(ErrorKind::MissingValue, "line " + std::to_string(line_number) +
                                                 " has a missing cell (use --drop-missing)")
            .with_index(line_number);
      }
      ++data.dropped_rows;
      continue;
    }
    rows.push_back(std::move(row));
    if (cluster_index) data.cluster_labels.push_back(cells[*cluster_index]);
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyFile, "no data rows");

  data.values.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(numeric_index.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      data.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  data.cluster_column = options.cluster_column;
  return data;
}

Dataset ingest_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open '" + path + "'");
  return read_csv(in, options);
}

}  // namespace yfwl
