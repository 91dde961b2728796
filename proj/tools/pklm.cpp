#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "pklm/bench.hpp"
#include "pklm/csv.hpp"
#include "pklm/errors.hpp"
#include "pklm/parallel.hpp"
#include "pklm/pklm_test.hpp"
#include "pklm/report.hpp"
#include "pklm/synth.hpp"

namespace {

struct TestArgs {
  std::string input;
  std::string out;
  pklm::TestConfig config;
  double alpha = 0.05;
  char delimiter = ',';
  bool no_header = false;
  bool drop_all_missing = false;
  std::vector<std::string> missing_tokens;
};

struct SimulateArgs {
  pklm::SimSpec spec{1, 200, 4, 0.65, pklm::Mechanism::mcar, 1};
  std::string mechanism = "mcar";
  std::string out;
};

struct BenchArgs {
  pklm::BenchSpec spec;
  std::vector<std::string> mechanisms{"mcar", "mar"};
  std::string out;
};

void add_hyperparameters(CLI::App* cmd, pklm::TestConfig& cfg) {
  cmd->add_option("--num-proj", cfg.num_proj, "Number of projection pairs")
      ->capture_default_str();
  cmd->add_option("--nrep", cfg.nrep, "Number of mask row permutations")->capture_default_str();
  cmd->add_option("--num-trees", cfg.num_trees_per_proj, "Trees per projection forest")
      ->capture_default_str();
  cmd->add_option("--min-node-size", cfg.min_node_size, "Minimal node size in a tree")
      ->capture_default_str();
  cmd->add_option("--size-resp-set", cfg.size_resp_set, "Maximum collapsed classes")
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads,
                  "Worker threads (0 = PKLM_THREADS env or hardware)")
      ->capture_default_str();
}

int run_test(const TestArgs& args) {
  pklm::CsvOptions csv;
  csv.delimiter = args.delimiter;
  csv.has_header = !args.no_header;
  if (!args.missing_tokens.empty()) csv.missing_tokens = args.missing_tokens;
  csv.drop_all_missing_rows = args.drop_all_missing;

  std::size_t dropped = 0;
  pklm::DataMatrix data = pklm::load_csv(args.input, csv, &dropped);
  if (dropped > 0)
    std::cerr << "warning: dropped " << dropped << " all-missing row(s)\n";

  auto start = std::chrono::steady_clock::now();
  pklm::TestReport result = pklm::pklm_test(data, args.config);
  auto elapsed = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();

  pklm::ReportDocument doc;
  doc.config = args.config;
  doc.alpha = args.alpha;
  doc.input_path = args.input;
  doc.n_rows = data.n_rows();
  doc.n_cols = data.n_cols();
  doc.column_names = data.column_names();
  doc.result = std::move(result);
  doc.wall_time_ms = elapsed;
  if (!args.out.empty()) pklm::write_report(doc, args.out);

  const auto& r = doc.result;
  std::printf("input: %s (n=%zu, p=%zu)\n", args.input.c_str(), data.n_rows(), data.n_cols());
  std::printf("statistic: %.6f\n", r.statistic);
  std::printf("p-value: %.6f\n", r.p_value);
  if (r.has_warning(pklm::kWarnNoMissingness)) {
    std::printf("verdict: no missingness to test\n");
  } else if (r.p_value <= args.alpha) {
    std::printf("verdict: REJECT MCAR at alpha=%g\n", args.alpha);
  } else {
    std::printf("verdict: fail to reject MCAR at alpha=%g\n", args.alpha);
  }
  if (r.partial_p_values) {
    std::printf("partial p-values:\n");
    for (std::size_t k = 0; k < r.partial_p_values->size(); ++k) {
      const auto& v = (*r.partial_p_values)[k];
      if (v)
        std::printf("  %s: %.6f\n", data.column_name(k).c_str(), *v);
      else
        std::printf("  %s: undefined (no projection excludes it)\n",
                    data.column_name(k).c_str());
    }
  }
  for (const auto& w : r.warnings)
    if (w != pklm::kWarnNoMissingness) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::fprintf(stderr, "wall time: %.1f ms\n", elapsed);
  return 0;
}

int run_simulate(SimulateArgs& args) {
  args.spec.mechanism = pklm::mechanism_from_string(args.mechanism);
  args.spec.validate();
  pklm::DataMatrix data = pklm::simulate(args.spec);
  if (args.out.empty()) {
    pklm::write_csv(data, std::cout);
  } else {
    pklm::write_csv(data, args.out);
    std::fprintf(stderr, "wrote %zux%zu dataset to %s\n", data.n_rows(), data.n_cols(),
                 args.out.c_str());
  }
  return 0;
}

int run_bench(BenchArgs& args) {
  args.spec.threads = args.spec.test_config.threads;  // reps are the parallel unit
  args.spec.mechanisms.clear();
  for (const auto& m : args.mechanisms)
    args.spec.mechanisms.push_back(pklm::mechanism_from_string(m));
  args.spec.validate();
  auto rows = pklm::run_bench(args.spec);
  std::string table = pklm::bench_table_csv(args.spec, rows);
  if (args.out.empty()) {
    std::cout << table;
  } else {
    std::ofstream out(args.out);
    if (!out) throw pklm::Error("cannot open file for writing: " + args.out);
    out << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classifier-based permutation test of the MCAR assumption"};
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test_cmd = app.add_subcommand("test", "Test a CSV dataset for MCAR");
  test_cmd->add_option("input", test_args.input, "CSV file with missing cells")
      ->required()
      ->check(CLI::ExistingFile);
  add_hyperparameters(test_cmd, test_args.config);
  test_cmd->add_option("--seed", test_args.config.seed, "Master seed")->capture_default_str();
  test_cmd->add_flag("--partial", test_args.config.compute_partial,
                     "Also compute per-variable partial p-values");
  test_cmd->add_option("--alpha", test_args.alpha, "Level for the printed verdict")
      ->capture_default_str();
  test_cmd->add_option("--out", test_args.out, "Write a JSON report here");
  test_cmd->add_option("--delimiter", test_args.delimiter, "Field delimiter")
      ->capture_default_str();
  test_cmd->add_flag("--no-header", test_args.no_header, "Input has no header row");
  test_cmd->add_option("--missing-token", test_args.missing_tokens,
                       "Token treated as missing (repeatable; default NA and empty)");
  test_cmd->add_flag("--drop-all-missing", test_args.drop_all_missing,
                     "Drop all-missing rows instead of failing");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a benchmark dataset with holes");
  sim_cmd->add_option("--case", sim_args.spec.case_id, "Data distribution (1-8)")
      ->capture_default_str();
  sim_cmd->add_option("--n", sim_args.spec.n, "Rows")->capture_default_str();
  sim_cmd->add_option("--p", sim_args.spec.p, "Columns")->capture_default_str();
  sim_cmd->add_option("--r", sim_args.spec.r, "Target fraction of complete rows")
      ->capture_default_str();
  sim_cmd->add_option("--mechanism", sim_args.mechanism, "mcar or mar")->capture_default_str();
  sim_cmd->add_option("--seed", sim_args.spec.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--out", sim_args.out, "Output CSV path (default stdout)");

  BenchArgs bench_args;
  auto* bench_cmd =
      app.add_subcommand("bench", "Rejection-rate table over simulate+test replicates");
  bench_cmd->add_option("--cases", bench_args.spec.cases, "Cases to run (subset of 1-8)")
      ->required();
  bench_cmd->add_option("--n", bench_args.spec.n, "Rows")->required();
  bench_cmd->add_option("--p", bench_args.spec.p, "Columns")->required();
  bench_cmd->add_option("--r", bench_args.spec.r, "Target fraction of complete rows")
      ->capture_default_str();
  bench_cmd->add_option("--mechanisms", bench_args.mechanisms,
                        "mcar gives type-I error, mar gives power")
      ->capture_default_str();
  bench_cmd->add_option("--reps", bench_args.spec.reps, "Replicates per cell")
      ->capture_default_str();
  bench_cmd->add_option("--alpha", bench_args.spec.alpha, "Rejection level")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.spec.seed, "Master seed")->capture_default_str();
  add_hyperparameters(bench_cmd, bench_args.spec.test_config);
  bench_cmd->add_option("--out", bench_args.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
    if (test_cmd->parsed()) return run_test(test_args);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
