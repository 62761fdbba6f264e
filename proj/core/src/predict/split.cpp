#include "nwtb/predict/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nwtb/mobility/rng.hpp"

namespace nwtb::predict {

Split split_dataset(std::span<const FeatureRow> rows, const SplitSpec& spec) {
  const auto n = rows.size();
  if (n < kMinSplitRows) {
    throw std::invalid_argument("need at least " + std::to_string(kMinSplitRows) + " rows to split, got " +
                                std::to_string(n));
  }
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw std::invalid_argument("train fraction must be in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (spec.strategy == SplitStrategy::kRandom) {
    mobility::Rng rng(spec.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(order[i], order[mobility::uniform_index(rng, i + 1)]);
    }
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a].label_time_s < rows[b].label_time_s; });
  }
  const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
  Split out;
  out.train.reserve(n_train);
  out.test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? out.train : out.test).push_back(rows[order[i]]);
  }
  return out;
}

}  // namespace nwtb::predict
