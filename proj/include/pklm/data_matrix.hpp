#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pklm/errors.hpp"

namespace pklm {

enum class ColumnKind : std::uint8_t { numeric, categorical };

// Rectangular table of optional cells. Numeric cells hold their value
// directly; categorical cells hold an integer code interned against the
// column's category table. Immutable once built, so it can be shared
// read-only across worker threads.
class DataMatrix {
 public:
  DataMatrix(std::size_t n_rows, std::size_t n_cols)
      : n_rows_(n_rows),
        n_cols_(n_cols),
        values_(n_rows * n_cols, 0.0),
        present_(n_rows * n_cols, 0),
        kinds_(n_cols, ColumnKind::numeric),
        categories_(n_cols),
        column_names_(n_cols) {
    for (std::size_t j = 0; j < n_cols; ++j) column_names_[j] = "x" + std::to_string(j + 1);
  }

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }

  bool is_present(std::size_t i, std::size_t j) const { return present_[i * n_cols_ + j] != 0; }
  bool is_missing(std::size_t i, std::size_t j) const { return !is_present(i, j); }
  double value(std::size_t i, std::size_t j) const { return values_[i * n_cols_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_cols_ + j] = v;
    present_[i * n_cols_ + j] = 1;
  }
  void set_missing(std::size_t i, std::size_t j) { present_[i * n_cols_ + j] = 0; }

  ColumnKind column_kind(std::size_t j) const { return kinds_[j]; }
  void set_column_kind(std::size_t j, ColumnKind k) { kinds_[j] = k; }

  const std::string& column_name(std::size_t j) const { return column_names_[j]; }
  void set_column_name(std::size_t j, std::string name) { column_names_[j] = std::move(name); }
  const std::vector<std::string>& column_names() const { return column_names_; }

  // Interns a categorical label, returning its integer code.
  std::size_t intern_category(std::size_t j, const std::string& label) {
    auto& cats = categories_[j];
    for (std::size_t c = 0; c < cats.size(); ++c)
      if (cats[c] == label) return c;
    cats.push_back(label);
    return cats.size() - 1;
  }
  const std::vector<std::string>& categories(std::size_t j) const { return categories_[j]; }

  std::size_t count_missing() const {
    std::size_t k = 0;
    for (auto b : present_) k += (b == 0);
    return k;
  }

  bool row_all_missing(std::size_t i) const {
    for (std::size_t j = 0; j < n_cols_; ++j)
      if (is_present(i, j)) return false;
    return true;
  }

  // Shape requirements for running the test: at least one row and enough
  // columns to split into a disjoint projection pair.
  void require_testable() const {
    if (n_rows_ == 0) throw EmptyData();
    if (n_cols_ < 2) throw DimensionTooSmall(n_cols_);
  }

 private:
  std::size_t n_rows_;
  std::size_t n_cols_;
  std::vector<double> values_;
  std::vector<std::uint8_t> present_;
  std::vector<ColumnKind> kinds_;
  std::vector<std::vector<std::string>> categories_;
  std::vector<std::string> column_names_;
};

}  // namespace pklm
