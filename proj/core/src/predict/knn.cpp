#include "nwtb/predict/classifier.hpp"

#include <algorithm>
#include <stdexcept>

namespace nwtb::predict {

void Knn::fit(const Matrix& x, std::span<const int> y, int n_classes) {
  if (x.rows == 0 || y.size() != x.rows) throw std::invalid_argument("knn needs labelled rows");
  if (params_.k == 0) throw std::invalid_argument("k must be positive");
  x_ = x;
  y_.assign(y.begin(), y.end());
  n_classes_ = n_classes;
}

ClassVote Knn::predict(std::span<const double> x) const {
  if (y_.empty()) throw std::logic_error("knn is not fitted");
  std::vector<std::pair<double, std::size_t>> dist(x_.rows);
  for (std::size_t i = 0; i < x_.rows; ++i) {
    const auto row = x_.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) d += (row[j] - x[j]) * (row[j] - x[j]);
    dist[i] = {d, i};
  }
  const auto k = std::min(params_.k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> votes(static_cast<std::size_t>(n_classes_), 0);
  for (std::size_t i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(y_[dist[i].second])];
  const auto best = std::max_element(votes.begin(), votes.end());
  return {static_cast<int>(best - votes.begin()), static_cast<double>(*best) / static_cast<double>(k)};
}

}  // namespace nwtb::predict
