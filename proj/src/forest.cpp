#include "pklm/forest.hpp"

#include <algorithm>
#include <cmath>

#include "pklm/errors.hpp"
#include "pklm/parallel.hpp"

namespace pklm {

namespace {

double gini(std::span<const std::uint32_t> counts, double total) {
  double sumsq = 0.0;
  for (auto c : counts) sumsq += static_cast<double>(c) * static_cast<double>(c);
  return 1.0 - sumsq / (total * total);
}

// Scans one feature's value-sorted row segment. Numeric candidates sit at
// midpoints between consecutive distinct values, categorical candidates
// test one level against the rest; both are visited in ascending order and
// only a strictly better score displaces the incumbent, so ties resolve to
// the lowest feature and smallest threshold.
void scan_rows(const std::vector<double>& col, std::span<const std::int32_t> labels,
               std::size_t n_classes, std::span<const std::uint32_t> rows, bool categorical,
               std::span<const std::uint32_t> counts_node, std::int32_t feature,
               double& best_score, std::optional<SplitChoice>& best,
               std::vector<std::uint32_t>& counts_left) {
  const std::size_t n = rows.size();
  const double n_node = static_cast<double>(n);
  std::fill(counts_left.begin(), counts_left.end(), 0);

  std::size_t n_left = 0;
  std::size_t i = 0;
  while (i < n) {
    const double v = col[rows[i]];
    std::size_t j = i;
    if (categorical) std::fill(counts_left.begin(), counts_left.end(), 0);
    while (j < n && col[rows[j]] == v) {
      ++counts_left[static_cast<std::size_t>(labels[rows[j]])];
      ++j;
    }
    if (!categorical) {
      n_left += j - i;
      if (j == n) break;
      double nl = static_cast<double>(n_left);
      double nr = n_node - nl;
      double sumsq_l = 0.0, sumsq_r = 0.0;
      for (std::size_t g = 0; g < n_classes; ++g) {
        double cl = counts_left[g];
        double cr = static_cast<double>(counts_node[g]) - cl;
        sumsq_l += cl * cl;
        sumsq_r += cr * cr;
      }
      double score = ((nl - sumsq_l / nl) + (nr - sumsq_r / nr)) / n_node;
      if (score < best_score) {
        best_score = score;
        best = SplitChoice{feature, 0.5 * (v + col[rows[j]]), false, score};
      }
    } else {
      double nl = static_cast<double>(j - i);
      double nr = n_node - nl;
      if (nr > 0.0) {
        double sumsq_l = 0.0, sumsq_r = 0.0;
        for (std::size_t g = 0; g < n_classes; ++g) {
          double cl = counts_left[g];
          double cr = static_cast<double>(counts_node[g]) - cl;
          sumsq_l += cl * cl;
          sumsq_r += cr * cr;
        }
        double score = ((nl - sumsq_l / nl) + (nr - sumsq_r / nr)) / n_node;
        if (score < best_score) {
          best_score = score;
          best = SplitChoice{feature, v, true, score};
        }
      }
    }
    i = j;
  }
}

struct BuilderWorkspace {
  // one value-sorted row list per feature, all holding the node's multiset
  std::vector<std::vector<std::uint32_t>> feature_rows;
  std::vector<std::uint32_t> partition_tmp;
  std::vector<std::uint32_t> counts_node;
  std::vector<std::uint32_t> counts_left;
};

Tree grow_tree(const FeatureMatrix& features, std::span<const std::int32_t> labels,
               std::size_t n_classes, const ForestConfig& config,
               const std::vector<std::vector<std::uint32_t>>& presorted, Rng& rng,
               BuilderWorkspace& ws) {
  const std::size_t n = features.n_rows();
  const std::size_t d = features.n_features();
  Tree tree;
  tree.in_bag_count.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    ++tree.in_bag_count[static_cast<std::size_t>(rng.next_below(n))];

  // expand the presorted row order into per-feature in-bag lists; sorted
  // order survives because duplicates stay adjacent
  ws.feature_rows.resize(d);
  for (std::size_t f = 0; f < d; ++f) {
    auto& list = ws.feature_rows[f];
    list.resize(n);
    std::size_t k = 0;
    for (auto r : presorted[f])
      for (std::uint32_t c = 0; c < tree.in_bag_count[r]; ++c) list[k++] = r;
  }
  ws.partition_tmp.resize(n);
  ws.counts_node.assign(n_classes, 0);
  ws.counts_left.assign(n_classes, 0);

  struct WorkItem {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t node;
  };
  std::vector<WorkItem> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, static_cast<std::uint32_t>(n), 0});

  while (!stack.empty()) {
    WorkItem item = stack.back();
    stack.pop_back();
    const std::size_t n_node = item.end - item.begin;

    std::fill(ws.counts_node.begin(), ws.counts_node.end(), 0);
    for (std::size_t k = item.begin; k < item.end; ++k)
      ++ws.counts_node[static_cast<std::size_t>(labels[ws.feature_rows[0][k]])];
    double node_impurity = gini(ws.counts_node, static_cast<double>(n_node));

    std::optional<SplitChoice> split;
    if (n_node > config.min_node_size && node_impurity > 0.0) {
      double best_score = node_impurity;
      for (std::size_t f = 0; f < d; ++f) {
        std::span<const std::uint32_t> segment(ws.feature_rows[f].data() + item.begin, n_node);
        scan_rows(features.columns[f], labels, n_classes, segment,
                  features.kinds[f] == ColumnKind::categorical, ws.counts_node,
                  static_cast<std::int32_t>(f), best_score, split, ws.counts_left);
      }
    }

    if (!split) {
      auto offset = static_cast<std::int32_t>(tree.leaf_probs.size());
      for (auto c : ws.counts_node)
        tree.leaf_probs.push_back(static_cast<double>(c) / static_cast<double>(n_node));
      tree.nodes[static_cast<std::size_t>(item.node)].leaf_offset = offset;
      continue;
    }

    // stable partition of every feature list keeps each side value-sorted
    const auto& split_col = features.columns[static_cast<std::size_t>(split->feature)];
    auto goes_left = [&](std::uint32_t r) {
      double v = split_col[r];
      return split->equality_split ? v == split->threshold : v <= split->threshold;
    };
    std::uint32_t mid = 0;
    for (std::size_t f = 0; f < d; ++f) {
      auto& list = ws.feature_rows[f];
      std::size_t lo = item.begin;
      std::size_t hi = 0;
      for (std::size_t k = item.begin; k < item.end; ++k) {
        if (goes_left(list[k]))
          list[lo++] = list[k];
        else
          ws.partition_tmp[hi++] = list[k];
      }
      std::copy(ws.partition_tmp.begin(), ws.partition_tmp.begin() + static_cast<std::ptrdiff_t>(hi),
                list.begin() + static_cast<std::ptrdiff_t>(lo));
      mid = static_cast<std::uint32_t>(lo);
    }

    auto left_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    auto right_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    auto& node = tree.nodes[static_cast<std::size_t>(item.node)];
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.equality_split = split->equality_split;
    node.left = left_id;
    node.right = right_id;
    stack.push_back({item.begin, mid, left_id});
    stack.push_back({mid, item.end, right_id});
  }
  return tree;
}

std::vector<std::vector<std::uint32_t>> presort_features(const FeatureMatrix& features) {
  const std::size_t n = features.n_rows();
  std::vector<std::vector<std::uint32_t>> presorted(features.n_features());
  for (std::size_t f = 0; f < features.n_features(); ++f) {
    auto& order = presorted[f];
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    const auto& col = features.columns[f];
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (col[a] != col[b]) return col[a] < col[b];
      return a < b;
    });
  }
  return presorted;
}

}  // namespace

std::int32_t Tree::leaf_for(const FeatureMatrix& features, std::size_t row) const {
  std::int32_t id = 0;
  while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(id)];
    double v = features.columns[static_cast<std::size_t>(node.feature)][row];
    bool left = node.equality_split ? v == node.threshold : v <= node.threshold;
    id = left ? node.left : node.right;
  }
  return id;
}

std::optional<SplitChoice> find_best_split(const FeatureMatrix& features,
                                           std::span<const std::int32_t> labels,
                                           std::size_t n_classes,
                                           std::span<const std::uint32_t> rows) {
  std::vector<std::uint32_t> counts_node(n_classes, 0);
  for (auto r : rows) ++counts_node[static_cast<std::size_t>(labels[r])];
  double node_impurity = gini(counts_node, static_cast<double>(rows.size()));
  if (node_impurity <= 0.0) return std::nullopt;

  std::optional<SplitChoice> best;
  double best_score = node_impurity;
  std::vector<std::uint32_t> counts_left(n_classes, 0);
  std::vector<std::uint32_t> sorted(rows.begin(), rows.end());
  for (std::size_t f = 0; f < features.n_features(); ++f) {
    const auto& col = features.columns[f];
    std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (col[a] != col[b]) return col[a] < col[b];
      return a < b;
    });
    scan_rows(col, labels, n_classes, sorted, features.kinds[f] == ColumnKind::categorical,
              counts_node, static_cast<std::int32_t>(f), best_score, best, counts_left);
  }
  return best;
}

FittedForest fit_forest(const FeatureMatrix& features, std::span<const std::int32_t> labels,
                        std::size_t n_classes, const ForestConfig& config, unsigned threads) {
  const std::size_t n = features.n_rows();
  if (n == 0) throw EmptyTraining();
  if (config.num_trees < 1 || config.min_node_size < 1)
    throw BadConfig("num_trees and min_node_size must be at least 1");
  if (config.mtry != features.n_features())
    throw BadConfig("mtry must equal the feature count (forests are grown with mtry full)");
  if (labels.size() != n) throw BadConfig("one label per training row required");
  bool mixed = false;
  std::int32_t first = labels.empty() ? 0 : labels[0];
  for (auto l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) throw BadConfig("label out of range");
    mixed = mixed || (l != first);
  }
  if (!mixed) throw SingleClass();

  auto presorted = presort_features(features);
  std::vector<Tree> trees(config.num_trees);
  if (threads <= 1) {
    BuilderWorkspace ws;
    for (std::size_t t = 0; t < config.num_trees; ++t) {
      Rng rng(derive_stream(config.rng_seed, t));
      trees[t] = grow_tree(features, labels, n_classes, config, presorted, rng, ws);
    }
  } else {
    parallel_for(config.num_trees, threads, [&](std::size_t t) {
      BuilderWorkspace ws;
      Rng rng(derive_stream(config.rng_seed, t));
      trees[t] = grow_tree(features, labels, n_classes, config, presorted, rng, ws);
    });
  }
  return FittedForest(std::move(trees), n, features.n_features(), n_classes);
}

OobProbabilities oob_probabilities(const FittedForest& forest, const FeatureMatrix& features) {
  const std::size_t n = forest.n_rows();
  const std::size_t k = forest.n_classes();
  OobProbabilities out;
  out.n_rows = n;
  out.n_classes = k;
  out.probs.assign(n * k, 0.0);
  out.coverage.assign(n, 0);

  // accumulate tree by tree, in tree order, so sums are scheduling-free
  for (const auto& tree : forest.trees()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (tree.in_bag_count[i] != 0) continue;
      auto leaf = static_cast<std::size_t>(tree.leaf_for(features, i));
      auto offset = static_cast<std::size_t>(tree.nodes[leaf].leaf_offset);
      for (std::size_t g = 0; g < k; ++g) out.probs[i * k + g] += tree.leaf_probs[offset + g];
      ++out.coverage[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.coverage[i] == 0) continue;
    for (std::size_t g = 0; g < k; ++g)
      out.probs[i * k + g] /= static_cast<double>(out.coverage[i]);
  }
  return out;
}

}  // namespace pklm
