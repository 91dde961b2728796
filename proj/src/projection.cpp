#include "pklm/projection.hpp"

#include <algorithm>
#include <numeric>

#include "pklm/errors.hpp"

namespace pklm {

namespace {

std::string pattern_key(const MissingnessMask& mask, std::size_t row,
                        std::span<const std::uint32_t> b_dims) {
  std::string key(b_dims.size(), '0');
  for (std::size_t k = 0; k < b_dims.size(); ++k)
    key[k] = static_cast<char>('0' + mask.bit(row, b_dims[k]));
  return key;
}

}  // namespace

ProjectionPair sample_projection_pair(Rng& rng, std::size_t p) {
  if (p < 2) throw DimensionTooSmall(p);
  std::vector<std::uint32_t> pool(p);
  std::iota(pool.begin(), pool.end(), 0);

  std::size_t r1 = 1 + static_cast<std::size_t>(rng.next_below(p - 1));
  for (std::size_t i = 0; i < r1; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(p - i));
    std::swap(pool[i], pool[j]);
  }
  std::size_t r2 = 1 + static_cast<std::size_t>(rng.next_below(p - r1));
  for (std::size_t i = r1; i < r1 + r2; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(p - i));
    std::swap(pool[i], pool[j]);
  }

  ProjectionPair pair;
  pair.a_dims.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(r1));
  pair.b_dims.assign(pool.begin() + static_cast<std::ptrdiff_t>(r1),
                     pool.begin() + static_cast<std::ptrdiff_t>(r1 + r2));
  std::sort(pair.a_dims.begin(), pair.a_dims.end());
  std::sort(pair.b_dims.begin(), pair.b_dims.end());
  return pair;
}

std::vector<std::uint32_t> complete_rows(const MissingnessMask& mask,
                                         std::span<const std::uint32_t> a_dims) {
  std::vector<std::uint32_t> rows;
  for (std::size_t i = 0; i < mask.n_rows(); ++i) {
    bool complete = true;
    for (auto j : a_dims) {
      if (mask.bit(i, j)) {
        complete = false;
        break;
      }
    }
    if (complete) rows.push_back(static_cast<std::uint32_t>(i));
  }
  return rows;
}

std::optional<CollapsedLabeling> collapse_labels(const MissingnessMask& mask,
                                                 std::span<const std::uint32_t> row_ids,
                                                 std::span<const std::uint32_t> b_dims,
                                                 std::size_t max_classes) {
  struct PatternInfo {
    std::uint32_t count = 0;
    std::uint32_t first_seen = 0;
  };
  std::unordered_map<std::string, PatternInfo> freq;
  std::vector<std::string> row_keys(row_ids.size());
  for (std::size_t k = 0; k < row_ids.size(); ++k) {
    row_keys[k] = pattern_key(mask, row_ids[k], b_dims);
    auto [it, inserted] = freq.try_emplace(row_keys[k]);
    if (inserted) it->second.first_seen = static_cast<std::uint32_t>(k);
    ++it->second.count;
  }
  if (freq.size() < 2) return std::nullopt;

  // rank patterns: decreasing frequency, ties by first occurrence
  std::vector<const std::pair<const std::string, PatternInfo>*> ranked;
  ranked.reserve(freq.size());
  for (const auto& kv : freq) ranked.push_back(&kv);
  std::sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) {
    if (a->second.count != b->second.count) return a->second.count > b->second.count;
    return a->second.first_seen < b->second.first_seen;
  });

  CollapsedLabeling out;
  out.row_ids.assign(row_ids.begin(), row_ids.end());
  std::size_t n_classes = std::min(freq.size(), max_classes);
  out.num_classes = static_cast<std::int32_t>(n_classes);
  out.class_counts.assign(n_classes, 0);
  for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
    auto cls = static_cast<std::int32_t>(std::min(rank, n_classes - 1));
    out.pattern_to_class.emplace(ranked[rank]->first, cls);
  }
  out.labels.resize(row_ids.size());
  for (std::size_t k = 0; k < row_ids.size(); ++k) {
    std::int32_t cls = out.pattern_to_class.at(row_keys[k]);
    out.labels[k] = cls;
    ++out.class_counts[static_cast<std::size_t>(cls)];
  }
  return out;
}

std::vector<std::int32_t> classify_all_rows(const MissingnessMask& mask,
                                            const CollapsedLabeling& labeling,
                                            std::span<const std::uint32_t> b_dims) {
  std::vector<std::int32_t> classes(mask.n_rows(), -1);
  for (std::size_t i = 0; i < mask.n_rows(); ++i) {
    auto it = labeling.pattern_to_class.find(pattern_key(mask, i, b_dims));
    if (it != labeling.pattern_to_class.end()) classes[i] = it->second;
  }
  return classes;
}

std::vector<std::int32_t> relabel_under_permutation(const MissingnessMask& mask_perm,
                                                    const CollapsedLabeling& labeling,
                                                    std::span<const std::uint32_t> b_dims) {
  std::vector<std::int32_t> labels(labeling.row_ids.size(), -1);
  for (std::size_t k = 0; k < labeling.row_ids.size(); ++k) {
    auto it = labeling.pattern_to_class.find(pattern_key(mask_perm, labeling.row_ids[k], b_dims));
    if (it != labeling.pattern_to_class.end()) labels[k] = it->second;
  }
  return labels;
}

}  // namespace pklm
