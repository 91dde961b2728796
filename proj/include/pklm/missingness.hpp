#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pklm/data_matrix.hpp"

namespace pklm {

// Binary indicator matrix: bit 1 marks a missing cell.
class MissingnessMask {
 public:
  MissingnessMask(std::size_t n_rows, std::size_t n_cols)
      : n_rows_(n_rows), n_cols_(n_cols), bits_(n_rows * n_cols, 0) {}

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }

  std::uint8_t bit(std::size_t i, std::size_t j) const { return bits_[i * n_cols_ + j]; }
  void set_bit(std::size_t i, std::size_t j, std::uint8_t b) { bits_[i * n_cols_ + j] = b; }

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {bits_.data() + i * n_cols_, n_cols_};
  }

  bool operator==(const MissingnessMask& other) const = default;

 private:
  std::size_t n_rows_;
  std::size_t n_cols_;
  std::vector<std::uint8_t> bits_;
};

// Derives the mask from a data matrix. Rows with every cell absent are
// rejected: such a row carries no observable information and its pattern
// is excluded from the grouping altogether.
MissingnessMask build_mask(const DataMatrix& data);

struct PatternCatalog {
  // distinct mask rows in order of first occurrence
  std::vector<std::vector<std::uint8_t>> patterns;
  std::vector<std::uint32_t> row_to_pattern;
  std::vector<std::uint32_t> group_sizes;

  std::size_t n_patterns() const { return patterns.size(); }
};

PatternCatalog extract_patterns(const MissingnessMask& mask);

// Row-permuted view used by the permutation scheme: row i of the result is
// row perm[i] of the input.
MissingnessMask permute_rows(const MissingnessMask& mask, std::span<const std::uint32_t> perm);

}  // namespace pklm
