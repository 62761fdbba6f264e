#include "nwtb/predict/classifier.hpp"

#if NWTB_ENABLE_ENSEMBLES

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nwtb/mobility/rng.hpp"

namespace nwtb::predict {
namespace {

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::vector<double> softmax(const std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) total += p[k] = std::exp(scores[k] - top);
  for (auto& v : p) v /= total;
  return p;
}

// Per-feature cut points. A value lands in bin j when it is <= cut j and
// > cut j-1; the last bin has no upper cut.
struct Bins {
  std::vector<std::vector<double>> cuts;
  std::vector<std::vector<std::uint8_t>> codes;  // [feature][row]
};

Bins make_bins(const Matrix& x, std::size_t max_bins) {
  Bins bins;
  bins.cuts.resize(x.cols);
  bins.codes.assign(x.cols, std::vector<std::uint8_t>(x.rows));
  std::vector<double> values;
  for (std::size_t f = 0; f < x.cols; ++f) {
    values.resize(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) values[i] = x.at(i, f);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    auto& cuts = bins.cuts[f];
    const auto u = values.size();
    if (u <= max_bins) {
      for (std::size_t i = 0; i + 1 < u; ++i) cuts.push_back(values[i] + (values[i + 1] - values[i]) / 2.0);
    } else {
      for (std::size_t b = 1; b < max_bins; ++b) {
        const auto i = b * u / max_bins - 1;
        cuts.push_back(values[i] + (values[i + 1] - values[i]) / 2.0);
      }
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }
    for (std::size_t i = 0; i < x.rows; ++i) {
      bins.codes[f][i] =
          static_cast<std::uint8_t>(std::lower_bound(cuts.begin(), cuts.end(), x.at(i, f)) - cuts.begin());
    }
  }
  return bins;
}

class RegTreeBuilder {
 public:
  RegTreeBuilder(const Bins& bins, const std::vector<double>& residual, int n_classes, int max_depth)
      : bins_(bins), residual_(residual), n_classes_(n_classes), max_depth_(max_depth) {}

  GradientBoosting::RegTree build(std::vector<std::size_t> rows) {
    tree_.clear();
    rows_ = std::move(rows);
    grow(0, rows_.size(), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::size_t begin, std::size_t end, int depth) {
    const auto id = static_cast<int>(tree_.size());
    tree_.emplace_back();
    const std::size_t n = end - begin;
    double sum = 0.0, hess = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double r = residual_[rows_[i]];
      sum += r;
      hess += std::abs(r) * (1.0 - std::abs(r));
    }
    const double k = n_classes_;
    tree_[static_cast<std::size_t>(id)].value = hess < 1e-150 ? 0.0 : (k - 1.0) / k * sum / hess;
    if (n < 2 || depth >= max_depth_) return id;

    const double parent = sum * sum / static_cast<double>(n);
    double best = parent;
    int best_feature = -1;
    std::size_t best_bin = 0;
    for (std::size_t f = 0; f < bins_.cuts.size(); ++f) {
      const auto n_bins = bins_.cuts[f].size() + 1;
      if (n_bins < 2) continue;
      sums_.assign(n_bins, 0.0);
      counts_.assign(n_bins, 0);
      for (std::size_t i = begin; i < end; ++i) {
        const auto b = bins_.codes[f][rows_[i]];
        sums_[b] += residual_[rows_[i]];
        ++counts_[b];
      }
      double left_sum = 0.0;
      std::size_t left_n = 0;
      for (std::size_t b = 0; b + 1 < n_bins; ++b) {
        left_sum += sums_[b];
        left_n += counts_[b];
        if (left_n == 0 || left_n == n || counts_[b] == 0) continue;
        const double right_sum = sum - left_sum;
        const double s = left_sum * left_sum / static_cast<double>(left_n) +
                         right_sum * right_sum / static_cast<double>(n - left_n);
        if (s > best + 1e-12 * std::max(1.0, std::abs(best))) {
          best = s;
          best_feature = static_cast<int>(f);
          best_bin = b;
        }
      }
    }
    if (best_feature < 0) return id;

    const auto f = static_cast<std::size_t>(best_feature);
    const auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                           rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                           [&](std::size_t r) { return bins_.codes[f][r] <= best_bin; }) -
                     rows_.begin();
    const int l = grow(begin, static_cast<std::size_t>(mid), depth + 1);
    const int r = grow(static_cast<std::size_t>(mid), end, depth + 1);
    auto& node = tree_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = bins_.cuts[f][best_bin];
    node.left = l;
    node.right = r;
    return id;
  }

  const Bins& bins_;
  const std::vector<double>& residual_;
  int n_classes_;
  int max_depth_;
  std::vector<std::size_t> rows_;
  GradientBoosting::RegTree tree_;
  std::vector<double> sums_;
  std::vector<std::size_t> counts_;
};

double evaluate_tree(const GradientBoosting::RegTree& tree, std::span<const double> x) {
  std::size_t id = 0;
  while (tree[id].feature >= 0) {
    id = static_cast<std::size_t>(x[static_cast<std::size_t>(tree[id].feature)] <= tree[id].threshold
                                      ? tree[id].left
                                      : tree[id].right);
  }
  return tree[id].value;
}

}  // namespace

void RandomForest::fit(const Matrix& x, std::span<const int> y, int n_classes) {
  if (x.rows == 0 || y.size() != x.rows) throw std::invalid_argument("forest needs labelled rows");
  if (params_.n_estimators == 0) throw std::invalid_argument("n_estimators must be positive");
  n_classes_ = n_classes;
  trees_.clear();
  const auto max_features = params_.max_features
                                ? params_.max_features
                                : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(x.cols))));
  for (std::size_t t = 0; t < params_.n_estimators; ++t) {
    const auto tree_seed = mobility::splitmix64(params_.seed + t);
    mobility::Rng rng(tree_seed);
    std::vector<std::size_t> sample(x.rows);
    for (auto& s : sample) s = mobility::uniform_index(rng, x.rows);
    DecisionTree tree({params_.max_depth, 2, max_features, tree_seed});
    tree.fit_rows(x, y, n_classes, std::move(sample));
    trees_.push_back(std::move(tree));
  }
}

ClassVote RandomForest::predict(std::span<const double> x) const {
  if (trees_.empty()) throw std::logic_error("forest is not fitted");
  std::vector<double> p(static_cast<std::size_t>(n_classes_), 0.0);
  for (const auto& tree : trees_) {
    const auto q = tree.predict_proba(x);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += q[k];
  }
  for (auto& v : p) v /= static_cast<double>(trees_.size());
  const int best = argmax(p);
  return {best, p[static_cast<std::size_t>(best)]};
}

void GradientBoosting::fit(const Matrix& x, std::span<const int> y, int n_classes) {
  if (x.rows == 0 || y.size() != x.rows) throw std::invalid_argument("boosting needs labelled rows");
  if (params_.max_bins < 2 || params_.max_bins > 256) throw std::invalid_argument("max_bins must be in [2, 256]");
  n_classes_ = n_classes;
  const auto n = x.rows;
  const auto K = static_cast<std::size_t>(n_classes);
  std::vector<std::size_t> counts(K, 0);
  for (int label : y) ++counts[static_cast<std::size_t>(label)];
  init_.assign(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    init_[k] = counts[k] ? std::log(static_cast<double>(counts[k]) / static_cast<double>(n)) : -30.0;
  }
  rounds_.clear();
  if (K < 2) return;

  const auto bins = make_bins(x, params_.max_bins);
  std::vector<double> raw(n * K);
  for (std::size_t i = 0; i < n; ++i) std::copy(init_.begin(), init_.end(), raw.begin() + i * K);
  std::vector<double> residual(n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<double> prob(n * K);

  for (std::size_t m = 0; m < params_.n_estimators; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> scores(raw.begin() + i * K, raw.begin() + (i + 1) * K);
      const auto p = softmax(scores);
      std::copy(p.begin(), p.end(), prob.begin() + i * K);
    }
    auto& round = rounds_.emplace_back();
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        residual[i] = (static_cast<std::size_t>(y[i]) == k ? 1.0 : 0.0) - prob[i * K + k];
      }
      RegTreeBuilder builder(bins, residual, n_classes, params_.max_depth);
      auto tree = builder.build(all);
      for (std::size_t i = 0; i < n; ++i) raw[i * K + k] += params_.learning_rate * evaluate_tree(tree, x.row(i));
      round.push_back(std::move(tree));
    }
  }
}

std::vector<double> GradientBoosting::predict_proba(std::span<const double> x) const {
  if (init_.empty()) throw std::logic_error("boosting is not fitted");
  auto scores = init_;
  for (const auto& round : rounds_) {
    for (std::size_t k = 0; k < round.size(); ++k) scores[k] += params_.learning_rate * evaluate_tree(round[k], x);
  }
  return softmax(scores);
}

ClassVote GradientBoosting::predict(std::span<const double> x) const {
  const auto p = predict_proba(x);
  const int best = argmax(p);
  return {best, p[static_cast<std::size_t>(best)]};
}

}  // namespace nwtb::predict

#endif
