#include "pklm/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "pklm/errors.hpp"

namespace pklm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits one physical record, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
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
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

bool parse_finite_double(const std::string& token, double& out) {
  if (token.empty()) return false;
  const char* begin = token.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + token.size()) return false;
  if (!std::isfinite(v)) return false;
  out = v;
  return true;
}

bool needs_quoting(const std::string& s, char delim) {
  return s.find(delim) != std::string::npos || s.find('"') != std::string::npos ||
         s.find('\n') != std::string::npos;
}

std::string quote_field(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

DataMatrix load_csv(std::istream& input, const CsvOptions& options, std::size_t* dropped_rows) {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<std::string>>> records;
  std::size_t n_cols = 0;

  std::string line;
  bool first = true;
  std::size_t record_index = 0;
  while (std::getline(input, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // a blank line is only a record when it can be one (single column)
    if (!first && line.empty() && n_cols != 1) continue;
    auto fields = split_record(line, options.delimiter);
    if (first) {
      n_cols = fields.size();
      first = false;
      if (options.has_header) {
        for (auto& f : fields) header.push_back(trim(f));
        continue;
      }
    }
    if (fields.size() != n_cols) throw RaggedRow(record_index, n_cols, fields.size());
    std::vector<std::optional<std::string>> record(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) {
      std::string token = trim(fields[j]);
      bool missing = std::find(options.missing_tokens.begin(), options.missing_tokens.end(),
                               token) != options.missing_tokens.end();
      if (!missing) record[j] = std::move(token);
    }
    records.push_back(std::move(record));
    ++record_index;
  }
  if (records.empty()) throw EmptyData();

  if (options.drop_all_missing_rows) {
    std::size_t before = records.size();
    std::erase_if(records, [](const auto& rec) {
      return std::all_of(rec.begin(), rec.end(), [](const auto& c) { return !c.has_value(); });
    });
    if (dropped_rows) *dropped_rows = before - records.size();
    if (records.empty()) throw EmptyData();
  } else if (dropped_rows) {
    *dropped_rows = 0;
  }

  // column kind pass: numeric iff every present token is a finite real
  std::vector<ColumnKind> kinds(n_cols, ColumnKind::numeric);
  for (std::size_t j = 0; j < n_cols; ++j) {
    for (const auto& rec : records) {
      double v;
      if (rec[j] && !parse_finite_double(*rec[j], v)) {
        kinds[j] = ColumnKind::categorical;
        break;
      }
    }
  }

  DataMatrix data(records.size(), n_cols);
  for (std::size_t j = 0; j < n_cols; ++j) {
    data.set_column_kind(j, kinds[j]);
    if (options.has_header && j < header.size() && !header[j].empty())
      data.set_column_name(j, header[j]);
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (!records[i][j]) continue;
      if (kinds[j] == ColumnKind::numeric) {
        double v;
        if (!parse_finite_double(*records[i][j], v))
          throw ParseError(i, j, "not a finite number: '" + *records[i][j] + "'");
        data.set(i, j, v);
      } else {
        data.set(i, j, static_cast<double>(data.intern_category(j, *records[i][j])));
      }
    }
  }
  return data;
}

DataMatrix load_csv(const std::string& path, const CsvOptions& options, std::size_t* dropped_rows) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return load_csv(in, options, dropped_rows);
}

void write_csv(const DataMatrix& data, std::ostream& output, const CsvOptions& options) {
  const std::string& na = options.missing_tokens.empty() ? std::string("NA")
                                                         : options.missing_tokens.front();
  char delim = options.delimiter;
  if (options.has_header) {
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
      if (j) output << delim;
      const std::string& name = data.column_name(j);
      output << (needs_quoting(name, delim) ? quote_field(name) : name);
    }
    output << '\n';
  }
  char buf[40];
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
      if (j) output << delim;
      if (data.is_missing(i, j)) {
        output << na;
      } else if (data.column_kind(j) == ColumnKind::numeric) {
        std::snprintf(buf, sizeof(buf), "%.17g", data.value(i, j));
        output << buf;
      } else {
        const auto& label = data.categories(j)[static_cast<std::size_t>(data.value(i, j))];
        output << (needs_quoting(label, delim) ? quote_field(label) : label);
      }
    }
    output << '\n';
  }
}

void write_csv(const DataMatrix& data, const std::string& path, const CsvOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path);
  write_csv(data, out, options);
}

}  // namespace pklm
