#pragma once

#include <optional>
#include <vector>

#include "pklm/pklm_test.hpp"
#include "pklm/synth.hpp"

namespace pklm {

// One simulate+test round per rep, parallel across reps with per-rep
// derived seeds. Returns the reps p-values in rep order.
std::vector<double> simulate_pvalues(const SimSpec& spec, const TestConfig& test_config,
                                     std::size_t reps, unsigned threads);

// Fraction of p-values at or below alpha: power under mar cells, type-I
// error under mcar cells.
double rejection_rate(const SimSpec& spec, const TestConfig& test_config, std::size_t reps,
                      double alpha, unsigned threads);

struct BenchSpec {
  std::vector<int> cases;
  std::vector<Mechanism> mechanisms;
  std::size_t n = 0;
  std::size_t p = 0;
  double r = 0.65;
  std::size_t reps = 300;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  TestConfig test_config;
  unsigned threads = 0;

  void validate() const;
};

struct BenchRow {
  int case_id = 0;
  std::optional<double> power;        // rejection rate under mar
  std::optional<double> type1_error;  // rejection rate under mcar
};

std::vector<BenchRow> run_bench(const BenchSpec& spec);

// CSV with one row per case: n,p,r,case,power,type1_error ("NA" for
// mechanisms that were not requested).
std::string bench_table_csv(const BenchSpec& spec, const std::vector<BenchRow>& rows);

}  // namespace pklm
