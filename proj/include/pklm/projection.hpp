#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pklm/missingness.hpp"
#include "pklm/rng.hpp"

namespace pklm {

// Disjoint variable subsets: A selects the feature space (rows must be
// fully observed on A), B's missingness patterns define the class labels.
struct ProjectionPair {
  std::vector<std::uint32_t> a_dims;  // ascending, 1 <= |A| <= p-1
  std::vector<std::uint32_t> b_dims;  // ascending, 1 <= |B| <= p-|A|, disjoint from A
};

// Hierarchical sampler: |A| uniform on {1..p-1}, A uniform without
// replacement, |B| uniform on {1..p-|A|}, B uniform without replacement
// from the complement of A.
ProjectionPair sample_projection_pair(Rng& rng, std::size_t p);

// Rows whose mask is zero on every index of A, ascending.
std::vector<std::uint32_t> complete_rows(const MissingnessMask& mask,
                                         std::span<const std::uint32_t> a_dims);

struct CollapsedLabeling {
  std::vector<std::uint32_t> row_ids;  // the rows complete on A, ascending
  std::vector<std::int32_t> labels;    // class id per row of row_ids, 0-based
  // full map from B-restricted pattern to class id, including patterns
  // merged into the residual class
  std::unordered_map<std::string, std::int32_t> pattern_to_class;
  std::vector<std::uint32_t> class_counts;
  std::int32_t num_classes = 0;
};

// Groups row_ids by their mask pattern restricted to B. Class ids are
// assigned by decreasing pattern frequency (ties by first occurrence).
// When more than max_classes patterns occur, the max_classes-1 most
// frequent keep their own class and the tail merges into one residual
// class. Returns nullopt when only a single pattern exists (a degenerate
// labeling the caller must resample or skip).
std::optional<CollapsedLabeling> collapse_labels(const MissingnessMask& mask,
                                                 std::span<const std::uint32_t> row_ids,
                                                 std::span<const std::uint32_t> b_dims,
                                                 std::size_t max_classes);

// Class ids the frozen labeling would assign to every row of a mask, -1
// for B-patterns absent from pattern_to_class. Rows relabeled -1 belong to
// no class; they still count toward every complement set.
std::vector<std::int32_t> classify_all_rows(const MissingnessMask& mask,
                                            const CollapsedLabeling& labeling,
                                            std::span<const std::uint32_t> b_dims);

// Labels of the frozen row set under a row-permuted mask: entry k is the
// class of labeling.row_ids[k] read from mask_perm, or -1 when its pattern
// was never seen at fit time.
std::vector<std::int32_t> relabel_under_permutation(const MissingnessMask& mask_perm,
                                                    const CollapsedLabeling& labeling,
                                                    std::span<const std::uint32_t> b_dims);

}  // namespace pklm
