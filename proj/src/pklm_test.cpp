#include "pklm/pklm_test.hpp"

#include <algorithm>
#include <numeric>

#include "pklm/errors.hpp"
#include "pklm/parallel.hpp"
#include "pklm/statistic.hpp"

namespace pklm {

namespace {

constexpr std::size_t kMaxProjectionAttempts = 50;

struct ProjectionResult {
  bool retained = false;
  std::size_t forests_fitted = 0;
  ProjectionDiagnostic diag;
  std::vector<double> permuted;  // one value per permutation
};

FeatureMatrix gather_features(const DataMatrix& data, std::span<const std::uint32_t> rows,
                              std::span<const std::uint32_t> a_dims) {
  FeatureMatrix features;
  features.columns.resize(a_dims.size());
  features.kinds.resize(a_dims.size());
  for (std::size_t f = 0; f < a_dims.size(); ++f) {
    features.kinds[f] = data.column_kind(a_dims[f]);
    auto& col = features.columns[f];
    col.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) col[k] = data.value(rows[k], a_dims[f]);
  }
  return features;
}

ProjectionResult run_projection(const DataMatrix& data, const MissingnessMask& mask,
                                const TestConfig& cfg, std::span<const Permutation> perms,
                                std::size_t proj_index) {
  ProjectionResult result;
  Rng rng(derive_stream(derive_stream(cfg.seed, kProjectionStream), proj_index));
  const std::uint64_t forest_seed =
      derive_stream(derive_stream(cfg.seed, kForestStream), proj_index);

  for (std::size_t attempt = 0; attempt < kMaxProjectionAttempts; ++attempt) {
    ProjectionPair pair = sample_projection_pair(rng, data.n_cols());
    auto rows = complete_rows(mask, pair.a_dims);
    if (rows.empty()) continue;
    auto labeling = collapse_labels(mask, rows, pair.b_dims, cfg.size_resp_set);
    if (!labeling) continue;

    FeatureMatrix features = gather_features(data, rows, pair.a_dims);
    ForestConfig fc;
    fc.num_trees = cfg.num_trees_per_proj;
    fc.min_node_size = cfg.min_node_size;
    fc.mtry = pair.a_dims.size();
    fc.rng_seed = forest_seed;
    FittedForest forest = fit_forest(features, labeling->labels,
                                     static_cast<std::size_t>(labeling->num_classes), fc);
    ++result.forests_fitted;
    ProbabilityTable table = make_probability_table(oob_probabilities(forest, features));

    auto observed = projection_statistic(table, labeling->labels);
    if (!observed) continue;  // every class side emptied by coverage; treat as degenerate

    // labels under each mask permutation come from the frozen class map;
    // row i of a permuted mask is row perm[i] of the original
    auto any_class = classify_all_rows(mask, *labeling, pair.b_dims);
    result.permuted.resize(perms.size());
    std::vector<std::int32_t> perm_labels(rows.size());
    for (std::size_t l = 0; l < perms.size(); ++l) {
      const auto& perm = perms[l];
      for (std::size_t k = 0; k < rows.size(); ++k) perm_labels[k] = any_class[perm[rows[k]]];
      auto stat = projection_statistic(table, perm_labels);
      result.permuted[l] = stat ? stat->value : 0.0;  // empty sum when no term is computable
    }

    result.retained = true;
    result.diag.pair = std::move(pair);
    result.diag.n_complete_rows = rows.size();
    result.diag.n_used_rows = observed->n_used_rows;
    result.diag.num_classes = labeling->num_classes;
    result.diag.value = observed->value;
    return result;
  }
  return result;
}

}  // namespace

void TestConfig::validate() const {
  if (num_proj < 1) throw BadConfig("num_proj must be at least 1");
  if (nrep < 1) throw BadConfig("nrep must be at least 1");
  if (num_trees_per_proj < 1) throw BadConfig("num_trees_per_proj must be at least 1");
  if (min_node_size < 1) throw BadConfig("min_node_size must be at least 1");
  if (size_resp_set < 2) throw BadConfig("size_resp_set must be at least 2");
}

bool is_permutation(std::span<const std::uint32_t> mapping) {
  std::vector<std::uint8_t> seen(mapping.size(), 0);
  for (auto v : mapping) {
    if (v >= mapping.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

bool TestReport::has_warning(const std::string& w) const {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

double p_value(double observed, std::span<const double> nulls) {
  std::size_t count = 0;
  for (double v : nulls) count += (v >= observed);
  return static_cast<double>(count + 1) / static_cast<double>(nulls.size() + 1);
}

std::vector<std::optional<double>> partial_p_values(
    std::span<const ProjectionPair> retained_pairs, std::span<const double> observed_values,
    const std::vector<std::vector<double>>& permuted_values, std::size_t n_variables) {
  std::vector<std::optional<double>> out(n_variables);
  const std::size_t n_perm = permuted_values.empty() ? 0 : permuted_values.front().size();
  for (std::size_t k = 0; k < n_variables; ++k) {
    double obs_sum = 0.0;
    std::vector<double> null_sums(n_perm, 0.0);
    std::size_t used = 0;
    for (std::size_t j = 0; j < retained_pairs.size(); ++j) {
      const auto& b = retained_pairs[j].b_dims;
      if (std::binary_search(b.begin(), b.end(), static_cast<std::uint32_t>(k))) continue;
      obs_sum += observed_values[j];
      for (std::size_t l = 0; l < n_perm; ++l) null_sums[l] += permuted_values[j][l];
      ++used;
    }
    if (used == 0) continue;
    double observed = obs_sum / static_cast<double>(used);
    for (auto& s : null_sums) s /= static_cast<double>(used);
    out[k] = p_value(observed, null_sums);
  }
  return out;
}

TestReport pklm_test(const DataMatrix& data, const TestConfig& config) {
  config.validate();
  data.require_testable();
  MissingnessMask mask = build_mask(data);
  PatternCatalog catalog = extract_patterns(mask);

  TestReport report;
  if (catalog.n_patterns() < 2) {
    // a single pattern (typically a fully observed dataset) carries no
    // group structure to compare
    report.warnings.emplace_back(kWarnNoMissingness);
    report.statistic = 0.0;
    report.p_value = 1.0;
    if (config.compute_partial)
      report.partial_p_values.emplace(data.n_cols());
    return report;
  }

  const std::size_t n = data.n_rows();
  std::vector<Permutation> perms(config.nrep);
  {
    Rng rng(derive_stream(config.seed, kPermutationStream));
    for (auto& perm : perms) {
      perm.resize(n);
      std::iota(perm.begin(), perm.end(), 0u);
      rng.shuffle(perm);
    }
  }

  std::vector<ProjectionResult> results(config.num_proj);
  parallel_for(config.num_proj, resolve_threads(config.threads), [&](std::size_t j) {
    results[j] = run_projection(data, mask, config, perms, j);
  });

  std::vector<ProjectionPair> retained_pairs;
  std::vector<double> observed_values;
  std::vector<std::vector<double>> permuted_values;
  for (auto& r : results) {
    report.forests_fitted += r.forests_fitted;
    if (!r.retained) continue;
    retained_pairs.push_back(r.diag.pair);
    observed_values.push_back(r.diag.value);
    permuted_values.push_back(std::move(r.permuted));
    report.per_projection.push_back(std::move(r.diag));
  }
  report.retained_projections = retained_pairs.size();
  if (retained_pairs.empty()) throw InsufficientData();
  if (retained_pairs.size() < config.num_proj)
    report.warnings.emplace_back(kWarnSkippedProjections);

  report.statistic = aggregate(observed_values);
  report.null_statistics.resize(config.nrep);
  std::vector<double> column(retained_pairs.size());
  for (std::size_t l = 0; l < config.nrep; ++l) {
    for (std::size_t j = 0; j < retained_pairs.size(); ++j) column[j] = permuted_values[j][l];
    report.null_statistics[l] = aggregate(column);
  }
  report.p_value = p_value(report.statistic, report.null_statistics);

  if (config.compute_partial)
    report.partial_p_values =
        partial_p_values(retained_pairs, observed_values, permuted_values, data.n_cols());
  return report;
}

}  // namespace pklm
