#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pklm/data_matrix.hpp"

namespace pklm {

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  // tokens (after trimming outer whitespace) treated as a missing cell
  std::vector<std::string> missing_tokens = {"NA", ""};
  // downgrade all-missing rows from a hard error to drop-with-warning
  bool drop_all_missing_rows = false;
};

// Parses a delimited text file into a DataMatrix. A column is numeric when
// every present token parses as a finite real number; otherwise it is
// categorical and tokens are interned to integer codes in order of first
// appearance. When drop_all_missing_rows is set, rows whose cells are all
// missing are removed and counted into *dropped_rows; otherwise they are
// kept for build_mask to reject.
DataMatrix load_csv(const std::string& path, const CsvOptions& options = {},
                    std::size_t* dropped_rows = nullptr);
DataMatrix load_csv(std::istream& input, const CsvOptions& options = {},
                    std::size_t* dropped_rows = nullptr);

// Writes a DataMatrix back out. Numeric cells use round-trip precision;
// missing cells use the first missing token ("NA" by default).
void write_csv(const DataMatrix& data, const std::string& path, const CsvOptions& options = {});
void write_csv(const DataMatrix& data, std::ostream& output, const CsvOptions& options = {});

}  // namespace pklm
