#include "pklm/missingness.hpp"

#include <string>
#include <unordered_map>

#include "pklm/errors.hpp"

namespace pklm {

MissingnessMask build_mask(const DataMatrix& data) {
  if (data.n_rows() == 0) throw EmptyData();
  MissingnessMask mask(data.n_rows(), data.n_cols());
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    bool any_present = false;
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
      if (data.is_missing(i, j)) {
        mask.set_bit(i, j, 1);
      } else {
        any_present = true;
      }
    }
    if (!any_present && data.n_cols() > 0) throw AllMissingRow(i);
  }
  return mask;
}

PatternCatalog extract_patterns(const MissingnessMask& mask) {
  PatternCatalog catalog;
  catalog.row_to_pattern.resize(mask.n_rows());
  std::unordered_map<std::string, std::uint32_t> seen;
  std::string key(mask.n_cols(), '\0');
  for (std::size_t i = 0; i < mask.n_rows(); ++i) {
    auto row = mask.row(i);
    for (std::size_t j = 0; j < mask.n_cols(); ++j) key[j] = static_cast<char>('0' + row[j]);
    auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(catalog.patterns.size()));
    if (inserted) {
      catalog.patterns.emplace_back(row.begin(), row.end());
      catalog.group_sizes.push_back(0);
    }
    catalog.row_to_pattern[i] = it->second;
    ++catalog.group_sizes[it->second];
  }
  return catalog;
}

MissingnessMask permute_rows(const MissingnessMask& mask, std::span<const std::uint32_t> perm) {
  MissingnessMask out(mask.n_rows(), mask.n_cols());
  for (std::size_t i = 0; i < mask.n_rows(); ++i) {
    for (std::size_t j = 0; j < mask.n_cols(); ++j) out.set_bit(i, j, mask.bit(perm[i], j));
  }
  return out;
}

}  // namespace pklm
