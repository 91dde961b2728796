#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pklm/data_matrix.hpp"
#include "pklm/rng.hpp"

namespace pklm {

// Complete (no missing cells) training data, column-major. Categorical
// columns hold integer codes stored as doubles.
struct FeatureMatrix {
  std::vector<std::vector<double>> columns;
  std::vector<ColumnKind> kinds;

  std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
  std::size_t n_features() const { return columns.size(); }
};

struct ForestConfig {
  std::size_t num_trees = 200;
  std::size_t min_node_size = 10;
  // number of candidate features per split; must equal the feature count
  // (the forest is always grown with the full projected dimension)
  std::size_t mtry = 0;
  std::uint64_t rng_seed = 0;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // numeric: x <= threshold goes left; categorical: x == threshold
  bool equality_split = false;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t leaf_offset = -1;  // index into Tree::leaf_probs, n_classes wide
};

struct Tree {
  std::vector<TreeNode> nodes;
  std::vector<double> leaf_probs;            // concatenated per-leaf class frequency vectors
  std::vector<std::uint32_t> in_bag_count;   // bootstrap multiplicity per training row

  // index of the leaf reached by training row `row`
  std::int32_t leaf_for(const FeatureMatrix& features, std::size_t row) const;
};

class FittedForest {
 public:
  FittedForest(std::vector<Tree> trees, std::size_t n_rows, std::size_t n_features,
               std::size_t n_classes)
      : trees_(std::move(trees)), n_rows_(n_rows), n_features_(n_features),
        n_classes_(n_classes) {}

  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_classes() const { return n_classes_; }

 private:
  std::vector<Tree> trees_;
  std::size_t n_rows_;
  std::size_t n_features_;
  std::size_t n_classes_;
};

struct SplitChoice {
  std::int32_t feature = -1;
  double threshold = 0.0;
  bool equality_split = false;
  double child_impurity = 0.0;  // size-weighted Gini of the two children
};

// Exhaustive Gini search over all features at one node. Numeric candidates
// are midpoints between consecutive distinct values; categorical candidates
// are one-level-vs-rest. Ties keep the first candidate in (feature,
// threshold) order. Returns nullopt when no split strictly reduces the
// node impurity.
std::optional<SplitChoice> find_best_split(const FeatureMatrix& features,
                                           std::span<const std::int32_t> labels,
                                           std::size_t n_classes,
                                           std::span<const std::uint32_t> rows);

// Grows num_trees CART trees on bootstrap samples (with replacement, same
// size as the training set). Nodes of at most min_node_size rows, pure
// nodes, and nodes with no impurity-reducing split become leaves storing
// in-bag class frequencies. Tree t consumes the substream
// derive_stream(config.rng_seed, t), so the result is identical for any
// thread count.
FittedForest fit_forest(const FeatureMatrix& features, std::span<const std::int32_t> labels,
                        std::size_t n_classes, const ForestConfig& config, unsigned threads = 1);

struct OobProbabilities {
  std::size_t n_rows = 0;
  std::size_t n_classes = 0;
  std::vector<double> probs;            // row-major n_rows x n_classes
  std::vector<std::uint32_t> coverage;  // trees in which the row was out-of-bag

  double prob(std::size_t i, std::size_t g) const { return probs[i * n_classes + g]; }
};

// Per-row class probabilities averaged over the trees that did not see the
// row in their bootstrap sample. Rows with zero coverage keep an all-zero
// probability row and must be excluded downstream.
OobProbabilities oob_probabilities(const FittedForest& forest, const FeatureMatrix& features);

}  // namespace pklm
