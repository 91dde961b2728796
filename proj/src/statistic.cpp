#include "pklm/statistic.hpp"

#include <cmath>

#include "pklm/errors.hpp"

namespace pklm {

ProbabilityTable make_probability_table(const OobProbabilities& oob) {
  ProbabilityTable table;
  table.n_rows = oob.n_rows;
  table.n_classes = oob.n_classes;
  table.logits.assign(oob.n_rows * oob.n_classes, 0.0);
  table.covered.assign(oob.n_rows, 0);
  for (std::size_t i = 0; i < oob.n_rows; ++i) {
    if (oob.coverage[i] == 0) continue;
    table.covered[i] = 1;
    ++table.covered_count;
    for (std::size_t g = 0; g < oob.n_classes; ++g) {
      double p = truncate_prob(oob.prob(i, g));
      table.logits[i * oob.n_classes + g] = std::log(p / (1.0 - p));
    }
  }
  return table;
}

std::optional<double> class_term(const ProbabilityTable& table, std::int32_t g,
                                 std::span<const std::int32_t> labels) {
  double sum_in = 0.0, sum_out = 0.0;
  std::size_t n_in = 0, n_out = 0;
  const std::size_t k = table.n_classes;
  const auto gu = static_cast<std::size_t>(g);
  for (std::size_t i = 0; i < table.n_rows; ++i) {
    if (!table.covered[i]) continue;
    double lg = table.logits[i * k + gu];
    if (labels[i] == g) {
      sum_in += lg;
      ++n_in;
    } else {
      sum_out += lg;
      ++n_out;
    }
  }
  if (n_in == 0 || n_out == 0) return std::nullopt;
  return sum_in / static_cast<double>(n_in) - sum_out / static_cast<double>(n_out);
}

std::optional<ProjectionStatistic> projection_statistic(const ProbabilityTable& table,
                                                        std::span<const std::int32_t> labels) {
  ProjectionStatistic out;
  out.n_used_rows = table.covered_count;
  bool any = false;
  for (std::size_t g = 0; g < table.n_classes; ++g) {
    auto term = class_term(table, static_cast<std::int32_t>(g), labels);
    if (!term) continue;
    out.value += *term;
    out.per_class_terms.emplace_back(static_cast<std::int32_t>(g), *term);
    any = true;
  }
  if (!any) return std::nullopt;
  return out;
}

double aggregate(std::span<const double> values) {
  if (values.empty()) throw NoProjections();
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double class_log_odds_mean(std::span<const double> probs, double prior) {
  double sum = 0.0;
  for (double p : probs) {
    double t = truncate_prob(p);
    sum += std::log(t / (1.0 - t));
  }
  double tp = truncate_prob(prior);
  return sum / static_cast<double>(probs.size()) - std::log(tp / (1.0 - tp));
}

}  // namespace pklm
