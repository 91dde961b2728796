#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pklm/forest.hpp"

namespace pklm {

// Clamps a probability away from 0 and 1 before it enters a log-odds.
inline double truncate_prob(double x) {
  constexpr double kEps = 1e-9;
  return std::min(std::max(x, kEps), 1.0 - kEps);
}

// Truncated per-row log-odds, precomputed once per projection so the
// permutation loop only regroups them. Rows never out-of-bag carry no
// probability estimate and are dropped from every class set.
struct ProbabilityTable {
  std::size_t n_rows = 0;
  std::size_t n_classes = 0;
  std::vector<double> logits;            // row-major, log(p/(1-p)) of truncated probs
  std::vector<std::uint8_t> covered;     // 1 when the row has OOB coverage
  std::size_t covered_count = 0;

  double logit(std::size_t i, std::size_t g) const { return logits[i * n_classes + g]; }
};

ProbabilityTable make_probability_table(const OobProbabilities& oob);

// Mean log-odds of class g over the rows labeled g, minus the same mean
// over all other covered rows (rows labeled -1 belong to no class and fall
// on the complement side of every class). Empty side => no term.
std::optional<double> class_term(const ProbabilityTable& table, std::int32_t g,
                                 std::span<const std::int32_t> labels);

struct ProjectionStatistic {
  double value = 0.0;
  std::vector<std::pair<std::int32_t, double>> per_class_terms;
  std::size_t n_used_rows = 0;
};

// Sum of the class terms over all classes; nullopt when no class yields a
// computable term.
std::optional<ProjectionStatistic> projection_statistic(const ProbabilityTable& table,
                                                        std::span<const std::int32_t> labels);

// Mean over the retained projections. Throws NoProjections on empty input.
double aggregate(std::span<const double> values);

// One-sided mean log-odds statistic for a single class against its prior:
// mean(log(p/(1-p))) - log(prior/(1-prior)) with truncation. Converges to
// the divergence between the class density and the complement mixture;
// kept for numerical checks, the test itself uses the symmetrized form.
double class_log_odds_mean(std::span<const double> probs, double prior);

}  // namespace pklm
