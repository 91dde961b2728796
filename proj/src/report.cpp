#include "pklm/report.hpp"

#include <cmath>
#include <fstream>

#include "pklm/errors.hpp"

namespace pklm {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json pair_to_json(const ProjectionPair& pair) {
  ordered_json j;
  j["a"] = pair.a_dims;
  j["b"] = pair.b_dims;
  return j;
}

ProjectionPair pair_from_json(const ordered_json& j) {
  ProjectionPair pair;
  pair.a_dims = j.at("a").get<std::vector<std::uint32_t>>();
  pair.b_dims = j.at("b").get<std::vector<std::uint32_t>>();
  return pair;
}

}  // namespace

ordered_json to_json(const ReportDocument& doc) {
  ordered_json j;
  j["schema_version"] = doc.schema_version;
  ordered_json cfg;
  cfg["num_proj"] = doc.config.num_proj;
  cfg["nrep"] = doc.config.nrep;
  cfg["num_trees_per_proj"] = doc.config.num_trees_per_proj;
  cfg["min_node_size"] = doc.config.min_node_size;
  cfg["size_resp_set"] = doc.config.size_resp_set;
  cfg["seed"] = doc.config.seed;
  cfg["compute_partial"] = doc.config.compute_partial;
  cfg["alpha"] = doc.alpha;
  j["config"] = cfg;
  ordered_json input;
  input["path"] = doc.input_path;
  input["n_rows"] = doc.n_rows;
  input["n_cols"] = doc.n_cols;
  input["columns"] = doc.column_names;
  j["input"] = input;
  j["statistic"] = doc.result.statistic;
  j["null_statistics"] = doc.result.null_statistics;
  j["p_value"] = doc.result.p_value;
  if (doc.result.partial_p_values) {
    ordered_json partial;
    for (std::size_t k = 0; k < doc.result.partial_p_values->size(); ++k) {
      const auto& v = (*doc.result.partial_p_values)[k];
      const std::string& name =
          k < doc.column_names.size() ? doc.column_names[k] : "x" + std::to_string(k + 1);
      if (v)
        partial[name] = *v;
      else
        partial[name] = nullptr;
    }
    j["partial_p_values"] = partial;
  } else {
    j["partial_p_values"] = nullptr;
  }
  j["retained_projections"] = doc.result.retained_projections;
  j["forests_fitted"] = doc.result.forests_fitted;
  ordered_json projs = ordered_json::array();
  for (const auto& d : doc.result.per_projection) {
    ordered_json pj = pair_to_json(d.pair);
    pj["n_complete_rows"] = d.n_complete_rows;
    pj["n_used_rows"] = d.n_used_rows;
    pj["classes"] = d.num_classes;
    pj["statistic"] = d.value;
    projs.push_back(std::move(pj));
  }
  j["projections"] = projs;
  j["warnings"] = doc.result.warnings;
  return j;
}

ReportDocument report_from_json(const ordered_json& j) {
  ReportDocument doc;
  doc.schema_version = j.at("schema_version").get<std::string>();
  if (doc.schema_version != kReportSchemaVersion)
    throw Error("unsupported report schema: " + doc.schema_version);
  const auto& cfg = j.at("config");
  doc.config.num_proj = cfg.at("num_proj").get<std::size_t>();
  doc.config.nrep = cfg.at("nrep").get<std::size_t>();
  doc.config.num_trees_per_proj = cfg.at("num_trees_per_proj").get<std::size_t>();
  doc.config.min_node_size = cfg.at("min_node_size").get<std::size_t>();
  doc.config.size_resp_set = cfg.at("size_resp_set").get<std::size_t>();
  doc.config.seed = cfg.at("seed").get<std::uint64_t>();
  doc.config.compute_partial = cfg.at("compute_partial").get<bool>();
  doc.alpha = cfg.at("alpha").get<double>();
  const auto& input = j.at("input");
  doc.input_path = input.at("path").get<std::string>();
  doc.n_rows = input.at("n_rows").get<std::size_t>();
  doc.n_cols = input.at("n_cols").get<std::size_t>();
  doc.column_names = input.at("columns").get<std::vector<std::string>>();
  doc.result.statistic = j.at("statistic").get<double>();
  doc.result.null_statistics = j.at("null_statistics").get<std::vector<double>>();
  doc.result.p_value = j.at("p_value").get<double>();
  if (!j.at("partial_p_values").is_null()) {
    std::vector<std::optional<double>> partial(doc.n_cols);
    for (std::size_t k = 0; k < doc.n_cols; ++k) {
      const std::string& name =
          k < doc.column_names.size() ? doc.column_names[k] : "x" + std::to_string(k + 1);
      const auto& v = j.at("partial_p_values").at(name);
      if (!v.is_null()) partial[k] = v.get<double>();
    }
    doc.result.partial_p_values = std::move(partial);
  }
  doc.result.retained_projections = j.at("retained_projections").get<std::size_t>();
  doc.result.forests_fitted = j.at("forests_fitted").get<std::size_t>();
  for (const auto& pj : j.at("projections")) {
    ProjectionDiagnostic d;
    d.pair = pair_from_json(pj);
    d.n_complete_rows = pj.at("n_complete_rows").get<std::size_t>();
    d.n_used_rows = pj.at("n_used_rows").get<std::size_t>();
    d.num_classes = pj.at("classes").get<std::int32_t>();
    d.value = pj.at("statistic").get<double>();
    doc.result.per_projection.push_back(std::move(d));
  }
  doc.result.warnings = j.at("warnings").get<std::vector<std::string>>();
  return doc;
}

std::string serialize_report(const ReportDocument& doc) {
  double recomputed = p_value(doc.result.statistic, doc.result.null_statistics);
  if (recomputed != doc.result.p_value)
    throw Error("report cross-check failed: embedded p-value does not match its statistics");
  return to_json(doc).dump(2) + "\n";
}

void write_report(const ReportDocument& doc, const std::string& path) {
  std::string payload = serialize_report(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << payload;
}

}  // namespace pklm
