#pragma once

#include <cstdint>
#include <string>

#include "pklm/data_matrix.hpp"
#include "pklm/rng.hpp"

namespace pklm {

enum class Mechanism : std::uint8_t { mcar, mar };

Mechanism mechanism_from_string(const std::string& s);
std::string to_string(Mechanism m);

// Benchmark simulation cell. r is the target fraction of fully observed
// rows; `correlated` cases use the equicorrelation matrix with diagonal 1
// and off-diagonal 0.7.
struct SimSpec {
  int case_id = 1;      // 1 normal, 2 correlated normal, 3 t4, 4 correlated t4,
                        // 5 uniform, 6 correlated uniform, 7 normal + 0.1 cube,
                        // 8 Weibull(1, 2)
  std::size_t n = 0;
  std::size_t p = 0;
  double r = 1.0;
  Mechanism mechanism = Mechanism::mcar;
  std::uint64_t seed = 1;

  void validate() const;
};

// Fully observed draw of the spec's data distribution.
DataMatrix gen_case(const SimSpec& spec, Rng& rng);

// Each cell goes missing independently with probability 1 - r^(1/p), so a
// row stays complete with probability r. Rows that would lose every cell
// are redrawn.
DataMatrix ampute_mcar(const DataMatrix& data, double r, Rng& rng);

// First builds a mask with column 1 fully observed and the other cells
// missing independently with probability 1 - r^(1/(p-1)), then pairs mask
// rows to data rows: rows of the data whose first value is below the
// column mean pick (without replacement) from the incomplete mask rows
// with probability 5/6, from the complete ones with probability 1/6, and
// the reverse at or above the mean. When a group runs out the other one
// is used.
DataMatrix ampute_mar(const DataMatrix& data, double r, Rng& rng);

// gen_case + the spec's amputation mechanism, seeded from spec.seed.
DataMatrix simulate(const SimSpec& spec);

// Two correlated standard normals (corr 0.5) where the second variable is
// blanked on three bands of the first, chosen so the groups keep equal
// means and variances (~30% missing). Defeats moment-based tests.
DataMatrix yuan_example(std::size_t n, Rng& rng);

// Independent standard normals where variable 1's missingness is driven by
// the value of variable 2 (missing iff it exceeds 0.5) while variables
// 2..p carry plain MCAR holes at complete-row rate r. Removing variable 1
// from the label sets makes the remainder MCAR, which is what the partial
// p-values are meant to localize.
DataMatrix gen_localized_mar(std::size_t n, std::size_t p, double r, Rng& rng);

}  // namespace pklm
