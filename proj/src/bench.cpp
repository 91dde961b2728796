#include "pklm/bench.hpp"

#include <algorithm>
#include <cstdio>

#include "pklm/errors.hpp"
#include "pklm/parallel.hpp"

namespace pklm {

std::vector<double> simulate_pvalues(const SimSpec& spec, const TestConfig& test_config,
                                     std::size_t reps, unsigned threads) {
  spec.validate();
  test_config.validate();
  std::vector<double> pvalues(reps);
  parallel_for(reps, resolve_threads(threads), [&](std::size_t rep) {
    SimSpec rep_spec = spec;
    rep_spec.seed = derive_stream(derive_stream(spec.seed, kBenchDataStream), rep);
    DataMatrix data = simulate(rep_spec);
    TestConfig cfg = test_config;
    cfg.seed = derive_stream(derive_stream(spec.seed, kBenchTestStream), rep);
    cfg.threads = 1;  // reps are the parallel unit
    pvalues[rep] = pklm_test(data, cfg).p_value;
  });
  return pvalues;
}

double rejection_rate(const SimSpec& spec, const TestConfig& test_config, std::size_t reps,
                      double alpha, unsigned threads) {
  auto pvalues = simulate_pvalues(spec, test_config, reps, threads);
  std::size_t rejected = 0;
  for (double p : pvalues) rejected += (p <= alpha);
  return static_cast<double>(rejected) / static_cast<double>(reps);
}

void BenchSpec::validate() const {
  if (reps < 1) throw BadSpec("reps must be at least 1");
  if (cases.empty()) throw BadSpec("at least one case is required");
  if (mechanisms.empty()) throw BadSpec("at least one mechanism is required");
  if (!(alpha > 0.0) || alpha >= 1.0) throw BadSpec("alpha must be in (0, 1)");
  for (int c : cases) {
    SimSpec probe{c, n, p, r, mechanisms.front(), seed};
    probe.validate();
  }
  for (Mechanism m : mechanisms) {
    SimSpec probe{cases.front(), n, p, r, m, seed};
    probe.validate();
  }
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  spec.validate();
  std::vector<BenchRow> rows;
  for (int case_id : spec.cases) {
    BenchRow row;
    row.case_id = case_id;
    for (Mechanism mech : spec.mechanisms) {
      SimSpec cell{case_id, spec.n, spec.p, spec.r, mech, 0};
      // one seed branch per (case, mechanism) cell
      cell.seed = derive_stream(derive_stream(spec.seed, static_cast<std::uint64_t>(case_id)),
                                mech == Mechanism::mcar ? 0 : 1);
      double rate = rejection_rate(cell, spec.test_config, spec.reps, spec.alpha, spec.threads);
      if (mech == Mechanism::mcar)
        row.type1_error = rate;
      else
        row.power = rate;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string bench_table_csv(const BenchSpec& spec, const std::vector<BenchRow>& rows) {
  std::string out = "n,p,r,case,power,type1_error\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g,%d,", spec.n, spec.p, spec.r, row.case_id);
    out += buf;
    if (row.power) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.power);
      out += buf;
    } else {
      out += "NA";
    }
    out += ',';
    if (row.type1_error) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.type1_error);
      out += buf;
    } else {
      out += "NA";
    }
    out += '\n';
  }
  return out;
}

}  // namespace pklm
