#include "nwtb/predict/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "nwtb/mobility/rng.hpp"

namespace nwtb::predict {
namespace {

__extension__ typedef __int128 Wide;

// Gini split quality as the exact fraction (SL*nR + SR*nL) / (nL*nR), where
// S = sum of squared class counts. Larger is purer.
struct SplitScore {
  Wide num = 0;
  Wide den = 1;
  bool better_than(const SplitScore& other) const { return num * other.den > other.num * den; }
};

SplitScore score(std::uint64_t sum_sq_left, std::uint64_t n_left, std::uint64_t sum_sq_right,
                 std::uint64_t n_right) {
  return {Wide(sum_sq_left) * Wide(n_right) + Wide(sum_sq_right) * Wide(n_left), Wide(n_left) * Wide(n_right)};
}

void set_leaf(DecisionTree::Node& node) {
  const auto it = std::max_element(node.counts.begin(), node.counts.end());
  const auto total = std::accumulate(node.counts.begin(), node.counts.end(), std::size_t{0});
  node.label = static_cast<int>(it - node.counts.begin());
  node.confidence = total ? static_cast<double>(*it) / static_cast<double>(total) : 0.0;
}

}  // namespace

void DecisionTree::fit(const Matrix& x, std::span<const int> y, int n_classes) {
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  fit_rows(x, y, n_classes, std::move(rows));
}

void DecisionTree::fit_rows(const Matrix& x, std::span<const int> y, int n_classes,
                            std::vector<std::size_t> rows) {
  if (y.size() != x.rows) throw std::invalid_argument("label count does not match rows");
  if (rows.empty() || n_classes <= 0) throw std::invalid_argument("cannot fit a tree on zero rows");
  n_classes_ = n_classes;
  nodes_.clear();
  std::uint64_t rng_state = params_.seed;
  build(x, y, rows, 0, rows.size(), 0, rng_state);
}

int DecisionTree::build(const Matrix& x, std::span<const int> y, std::vector<std::size_t>& rows,
                        std::size_t begin, std::size_t end, int depth, std::uint64_t& rng_state) {
  const auto id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  {
    auto& node = nodes_.back();
    node.counts.assign(static_cast<std::size_t>(n_classes_), 0);
    for (std::size_t i = begin; i < end; ++i) ++node.counts[static_cast<std::size_t>(y[rows[i]])];
    set_leaf(node);
  }
  const std::size_t n = end - begin;
  const auto parent_counts = nodes_[static_cast<std::size_t>(id)].counts;
  const bool pure = std::count_if(parent_counts.begin(), parent_counts.end(), [](auto c) { return c > 0; }) <= 1;
  if (pure || n < params_.min_samples_split || (params_.max_depth > 0 && depth >= params_.max_depth)) {
    return id;
  }

  std::vector<std::size_t> features(x.cols);
  std::iota(features.begin(), features.end(), std::size_t{0});
  if (params_.max_features > 0 && params_.max_features < x.cols) {
    mobility::Rng rng(mobility::splitmix64(rng_state++));
    for (std::size_t i = 0; i < params_.max_features; ++i) {
      std::swap(features[i], features[i + mobility::uniform_index(rng, x.cols - i)]);
    }
    features.resize(params_.max_features);
    std::sort(features.begin(), features.end());
  }

  bool found = false;
  SplitScore best;
  std::size_t best_feature = 0;
  double best_threshold = 0.0;
  std::vector<std::pair<double, int>> column(n);
  std::vector<std::size_t> left(static_cast<std::size_t>(n_classes_));
  for (const auto f : features) {
    for (std::size_t i = 0; i < n; ++i) column[i] = {x.at(rows[begin + i], f), y[rows[begin + i]]};
    std::sort(column.begin(), column.end());
    std::fill(left.begin(), left.end(), 0);
    std::uint64_t sum_sq_left = 0;
    std::uint64_t sum_sq_right = 0;
    for (auto c : parent_counts) sum_sq_right += std::uint64_t(c) * c;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto k = static_cast<std::size_t>(column[i].second);
      sum_sq_left += 2 * left[k] + 1;
      sum_sq_right -= 2 * (parent_counts[k] - left[k]) - 1;
      ++left[k];
      if (!(column[i].first < column[i + 1].first)) continue;
      const auto candidate = score(sum_sq_left, i + 1, sum_sq_right, n - i - 1);
      if (!found || candidate.better_than(best)) {
        double threshold = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
        if (!(threshold < column[i + 1].first)) threshold = column[i].first;
        found = true;
        best = candidate;
        best_feature = f;
        best_threshold = threshold;
      }
    }
  }
  if (!found) return id;

  const auto mid = std::stable_partition(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                         rows.begin() + static_cast<std::ptrdiff_t>(end),
                                         [&](std::size_t r) { return x.at(r, best_feature) <= best_threshold; }) -
                   rows.begin();
  const auto split = static_cast<std::size_t>(mid);
  const int l = build(x, y, rows, begin, split, depth + 1, rng_state);
  const int r = build(x, y, rows, split, end, depth + 1, rng_state);
  auto& node = nodes_[static_cast<std::size_t>(id)];
  node.feature = static_cast<int>(best_feature);
  node.threshold = best_threshold;
  node.left = l;
  node.right = r;
  return id;
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
  if (nodes_.empty()) throw std::logic_error("tree is not fitted");
  const Node* node = &nodes_.front();
  while (node->feature >= 0) {
    node = &nodes_[static_cast<std::size_t>(x[static_cast<std::size_t>(node->feature)] <= node->threshold
                                                 ? node->left
                                                 : node->right)];
  }
  return *node;
}

ClassVote DecisionTree::predict(std::span<const double> x) const {
  const auto& leaf = leaf_for(x);
  return {leaf.label, leaf.confidence};
}

std::vector<double> DecisionTree::predict_proba(std::span<const double> x) const {
  const auto& leaf = leaf_for(x);
  const auto total = std::accumulate(leaf.counts.begin(), leaf.counts.end(), std::size_t{0});
  std::vector<double> p(leaf.counts.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = static_cast<double>(leaf.counts[k]) / static_cast<double>(total);
  return p;
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.feature >= 0) {
      stack.emplace_back(node.left, d + 1);
      stack.emplace_back(node.right, d + 1);
    }
  }
  return deepest;
}

}  // namespace nwtb::predict
