#pragma once

#include <string>

#include <json.hpp>

#include "pklm/pklm_test.hpp"

namespace pklm {

inline constexpr const char* kReportSchemaVersion = "pklm-report/1";

// Machine-readable result of one test run. Timing is carried in memory but
// never serialized: report files are byte-stable for a given input and
// seed, whatever the thread count or wall clock says.
struct ReportDocument {
  std::string schema_version = kReportSchemaVersion;
  TestConfig config;
  double alpha = 0.05;
  std::string input_path;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::string> column_names;
  TestReport result;
  double wall_time_ms = 0.0;
};

nlohmann::ordered_json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const nlohmann::ordered_json& j);

// Serializes after re-deriving the p-value from the embedded statistic and
// null statistics; a mismatch is a bug and throws.
std::string serialize_report(const ReportDocument& doc);
void write_report(const ReportDocument& doc, const std::string& path);

}  // namespace pklm
