#include "pklm/synth.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "pklm/errors.hpp"

namespace pklm {

namespace {

// symmetric PSD square root of the equicorrelation matrix (diag 1,
// off-diag 0.7)
Eigen::MatrixXd equicorrelation_sqrt(std::size_t p) {
  auto pi = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(pi, pi, 0.7);
  sigma.diagonal().setOnes();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  return solver.operatorSqrt();
}

DataMatrix from_rows(const std::vector<std::vector<double>>& rows, std::size_t p) {
  DataMatrix data(rows.size(), p);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < p; ++j) data.set(i, j, rows[i][j]);
  return data;
}

}  // namespace

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "mcar") return Mechanism::mcar;
  if (s == "mar") return Mechanism::mar;
  throw BadSpec("unknown mechanism '" + s + "' (expected mcar or mar)");
}

std::string to_string(Mechanism m) { return m == Mechanism::mcar ? "mcar" : "mar"; }

void SimSpec::validate() const {
  if (case_id < 1 || case_id > 8)
    throw BadSpec("case must be in 1..8, got " + std::to_string(case_id));
  if (n < 1) throw BadSpec("n must be at least 1");
  if (p < 1) throw BadSpec("p must be at least 1");
  if (!(r > 0.0) || r > 1.0) throw BadSpec("r must be in (0, 1]");
  if (mechanism == Mechanism::mar && p < 2)
    throw BadSpec("the mar mechanism keeps column 1 observed and needs p >= 2");
}

DataMatrix gen_case(const SimSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = spec.n, p = spec.p;
  const bool correlated = spec.case_id == 2 || spec.case_id == 4 || spec.case_id == 6;
  Eigen::MatrixXd sqrt_sigma;
  if (correlated) sqrt_sigma = equicorrelation_sqrt(p);

  std::vector<std::vector<double>> rows(n, std::vector<double>(p));
  Eigen::VectorXd z(static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows[i];
    switch (spec.case_id) {
      case 1:
        for (std::size_t j = 0; j < p; ++j) row[j] = rng.next_normal();
        break;
      case 2:
      case 4: {
        for (std::size_t j = 0; j < p; ++j) z[static_cast<Eigen::Index>(j)] = rng.next_normal();
        Eigen::VectorXd w = sqrt_sigma * z;
        double scale = spec.case_id == 4 ? std::sqrt(4.0 / rng.next_chisq4()) : 1.0;
        for (std::size_t j = 0; j < p; ++j) row[j] = scale * w[static_cast<Eigen::Index>(j)];
        break;
      }
      case 3: {
        for (std::size_t j = 0; j < p; ++j) row[j] = rng.next_normal();
        double scale = std::sqrt(4.0 / rng.next_chisq4());
        for (std::size_t j = 0; j < p; ++j) row[j] *= scale;
        break;
      }
      case 5:
        for (std::size_t j = 0; j < p; ++j) row[j] = rng.next_double();
        break;
      case 6: {
        for (std::size_t j = 0; j < p; ++j) z[static_cast<Eigen::Index>(j)] = rng.next_double();
        Eigen::VectorXd w = sqrt_sigma * z;
        for (std::size_t j = 0; j < p; ++j) row[j] = w[static_cast<Eigen::Index>(j)];
        break;
      }
      case 7:
        for (std::size_t j = 0; j < p; ++j) {
          double v = rng.next_normal();
          row[j] = v + 0.1 * v * v * v;
        }
        break;
      case 8:
        for (std::size_t j = 0; j < p; ++j) row[j] = rng.next_weibull_shape2();
        break;
      default:
        throw BadSpec("unreachable case");
    }
  }
  return from_rows(rows, p);
}

DataMatrix ampute_mcar(const DataMatrix& data, double r, Rng& rng) {
  if (!(r > 0.0) || r > 1.0) throw BadSpec("r must be in (0, 1]");
  const std::size_t n = data.n_rows(), p = data.n_cols();
  const double q = 1.0 - std::pow(r, 1.0 / static_cast<double>(p));
  DataMatrix out = data;
  std::vector<std::uint8_t> miss(p);
  for (std::size_t i = 0; i < n; ++i) {
    // redraw rows that would lose every cell; that pattern is excluded
    for (;;) {
      bool all = true;
      for (std::size_t j = 0; j < p; ++j) {
        miss[j] = rng.next_double() < q;
        all = all && miss[j];
      }
      if (!all) break;
    }
    for (std::size_t j = 0; j < p; ++j)
      if (miss[j]) out.set_missing(i, j);
  }
  return out;
}

DataMatrix ampute_mar(const DataMatrix& data, double r, Rng& rng) {
  const std::size_t n = data.n_rows(), p = data.n_cols();
  if (p < 2) throw BadSpec("the mar mechanism needs p >= 2");
  if (!(r > 0.0) || r > 1.0) throw BadSpec("r must be in (0, 1]");
  if (data.column_kind(0) != ColumnKind::numeric)
    throw BadSpec("the mar mechanism needs a numeric first column");
  for (std::size_t i = 0; i < n; ++i)
    if (data.is_missing(i, 0)) throw BadSpec("the mar mechanism needs column 1 fully observed");

  // mask rows drawn first, independently of the data
  const double q = 1.0 - std::pow(r, 1.0 / static_cast<double>(p - 1));
  std::vector<std::vector<std::uint8_t>> mask_rows(n, std::vector<std::uint8_t>(p, 0));
  std::vector<std::uint32_t> complete_group, missing_group;
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 1; j < p; ++j) {
      mask_rows[i][j] = rng.next_double() < q;
      any = any || mask_rows[i][j];
    }
    (any ? missing_group : complete_group).push_back(static_cast<std::uint32_t>(i));
  }

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += data.value(i, 0);
  mean /= static_cast<double>(n);

  auto take = [&rng](std::vector<std::uint32_t>& group) {
    std::size_t k = static_cast<std::size_t>(rng.next_below(group.size()));
    std::uint32_t row = group[k];
    group[k] = group.back();
    group.pop_back();
    return row;
  };

  DataMatrix out = data;
  for (std::size_t i = 0; i < n; ++i) {
    bool below = data.value(i, 0) < mean;
    double p_complete = below ? 1.0 / 6.0 : 5.0 / 6.0;
    bool want_complete = rng.next_double() < p_complete;
    std::vector<std::uint32_t>* group = want_complete ? &complete_group : &missing_group;
    if (group->empty()) group = want_complete ? &missing_group : &complete_group;
    const auto& mrow = mask_rows[take(*group)];
    for (std::size_t j = 0; j < p; ++j)
      if (mrow[j]) out.set_missing(i, j);
  }
  return out;
}

DataMatrix simulate(const SimSpec& spec) {
  spec.validate();
  Rng rng(derive_stream(spec.seed, kSimulateStream));
  DataMatrix full = gen_case(spec, rng);
  return spec.mechanism == Mechanism::mcar ? ampute_mcar(full, spec.r, rng)
                                           : ampute_mar(full, spec.r, rng);
}

DataMatrix yuan_example(std::size_t n, Rng& rng) {
  if (n < 1) throw BadSpec("n must be at least 1");
  DataMatrix data(n, 2);
  const double w = std::sqrt(0.75);
  for (std::size_t i = 0; i < n; ++i) {
    double z1 = rng.next_normal();
    double z2 = rng.next_normal();
    double x1 = z1;
    double x2 = 0.5 * z1 + w * z2;
    data.set(i, 0, x1);
    data.set(i, 1, x2);
    bool blank = x1 <= -1.932 || (x1 > -0.314 && x1 <= 0.314) || x1 > 1.932;
    if (blank) data.set_missing(i, 1);
  }
  return data;
}

DataMatrix gen_localized_mar(std::size_t n, std::size_t p, double r, Rng& rng) {
  if (p < 2) throw BadSpec("need p >= 2");
  if (!(r > 0.0) || r > 1.0) throw BadSpec("r must be in (0, 1]");
  const double q = 1.0 - std::pow(r, 1.0 / static_cast<double>(p - 1));
  DataMatrix data(n, p);
  std::vector<double> values(p);
  std::vector<std::uint8_t> miss(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (;;) {
      for (std::size_t j = 0; j < p; ++j) values[j] = rng.next_normal();
      miss[0] = values[1] > 0.5;
      bool all = miss[0];
      for (std::size_t j = 1; j < p; ++j) {
        miss[j] = rng.next_double() < q;
        all = all && miss[j];
      }
      if (!all) break;
    }
    for (std::size_t j = 0; j < p; ++j) {
      data.set(i, j, values[j]);
      if (miss[j]) data.set_missing(i, j);
    }
  }
  return data;
}

}  // namespace pklm
