#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "nwtb/predict/encoder.hpp"

namespace nwtb::predict {

// Labels are dense class indices 0..n_classes-1; index order is the sorted
// label order, so "smallest index" means "smallest label".
struct ClassVote {
  int label = 0;
  double confidence = 0.0;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const Matrix& x, std::span<const int> y, int n_classes) = 0;
  virtual ClassVote predict(std::span<const double> x) const = 0;
};

struct TreeParams {
  int max_depth = 0;  // 0: unlimited
  std::size_t min_samples_split = 2;
  std::size_t max_features = 0;  // 0: all features at every node
  std::uint64_t seed = 0;        // feature subsampling only
};

// CART classification tree, Gini impurity, exhaustive midpoint thresholds.
// A sample goes left when x[feature] <= threshold. Ties between equally good
// splits go to the lowest feature index, then the lowest threshold.
class DecisionTree : public Classifier {
 public:
  struct Node {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::size_t> counts;
    int label = 0;
    double confidence = 0.0;
  };

  explicit DecisionTree(TreeParams params = {}) : params_(params) {}

  void fit(const Matrix& x, std::span<const int> y, int n_classes) override;
  // Fits on the given row indices; repeats act as sample weights.
  void fit_rows(const Matrix& x, std::span<const int> y, int n_classes, std::vector<std::size_t> rows);
  ClassVote predict(std::span<const double> x) const override;
  // Class fractions at the reached leaf.
  std::vector<double> predict_proba(std::span<const double> x) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;

 private:
  int build(const Matrix& x, std::span<const int> y, std::vector<std::size_t>& rows, std::size_t begin,
            std::size_t end, int depth, std::uint64_t& rng_state);
  const Node& leaf_for(std::span<const double> x) const;

  TreeParams params_;
  int n_classes_ = 0;
  std::vector<Node> nodes_;
};

struct KnnParams {
  std::size_t k = 5;
};

// Brute-force k nearest neighbours, Euclidean distance. Equal distances go
// to the lower training index; vote ties go to the smallest label.
class Knn : public Classifier {
 public:
  explicit Knn(KnnParams params = {}) : params_(params) {}
  void fit(const Matrix& x, std::span<const int> y, int n_classes) override;
  ClassVote predict(std::span<const double> x) const override;

 private:
  KnnParams params_;
  Matrix x_;
  std::vector<int> y_;
  int n_classes_ = 0;
};

#if NWTB_ENABLE_ENSEMBLES

struct ForestParams {
  std::size_t n_estimators = 100;
  int max_depth = 0;
  std::size_t max_features = 0;  // 0: floor(sqrt(width))
  std::uint64_t seed = 0;
};

// Bagged Gini trees with per-node feature subsampling; probabilities are
// averaged across trees.
class RandomForest : public Classifier {
 public:
  explicit RandomForest(ForestParams params = {}) : params_(params) {}
  void fit(const Matrix& x, std::span<const int> y, int n_classes) override;
  ClassVote predict(std::span<const double> x) const override;

 private:
  ForestParams params_;
  int n_classes_ = 0;
  std::vector<DecisionTree> trees_;
};

struct BoostingParams {
  std::size_t n_estimators = 100;
  int max_depth = 9;
  double learning_rate = 0.05;
  std::size_t max_bins = 255;
};

// Multinomial-deviance gradient boosting over histogram regression trees,
// one tree per class per round.
class GradientBoosting : public Classifier {
 public:
  struct RegNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  using RegTree = std::vector<RegNode>;

  explicit GradientBoosting(BoostingParams params = {}) : params_(params) {}
  void fit(const Matrix& x, std::span<const int> y, int n_classes) override;
  ClassVote predict(std::span<const double> x) const override;
  std::vector<double> predict_proba(std::span<const double> x) const;

 private:
  BoostingParams params_;
  int n_classes_ = 0;
  std::vector<double> init_;
  std::vector<std::vector<RegTree>> rounds_;  // [round][class]
};

#endif

}  // namespace nwtb::predict
