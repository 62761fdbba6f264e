#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nwtb/predict/features.hpp"

namespace nwtb::predict {

enum class SplitStrategy { kRandom, kChronological };

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  SplitStrategy strategy = SplitStrategy::kRandom;
};

struct Split {
  std::vector<FeatureRow> train;
  std::vector<FeatureRow> test;
};

inline constexpr std::size_t kMinSplitRows = 10;

// |train| = round(train_fraction * n). Random: seeded Fisher-Yates shuffle.
// Chronological: rows ordered by label time, earliest go to train.
// Throws std::invalid_argument for fewer than kMinSplitRows rows.
Split split_dataset(std::span<const FeatureRow> rows, const SplitSpec& spec);

}  // namespace nwtb::predict
