#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nwtb/predict/features.hpp"

namespace nwtb::predict {

// Dense row-major feature matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct EncoderOptions {
  bool drop_supi = false;
};

// One-hot blocks for supi, prev_cell_1, prev_cell_2 and time_category (each
// over the sorted vocabulary seen at fit time), then min-max scaled cell_x,
// cell_y and visit_frequency. Categories unseen at fit time encode as an
// all-zero block.
class Encoder {
 public:
  Encoder() = default;
  explicit Encoder(EncoderOptions options) : options_(options) {}

  void fit(std::span<const FeatureRow> rows);
  std::vector<double> encode(const FeatureContext& features, std::size_t* unseen = nullptr) const;
  Matrix transform(std::span<const FeatureRow> rows, std::size_t* unseen = nullptr) const;

  std::size_t width() const;
  std::vector<std::string> column_names() const;
  const EncoderOptions& options() const { return options_; }

 private:
  struct Scale {
    double min = 0.0;
    double max = 0.0;
    double apply(double v) const { return max > min ? (v - min) / (max - min) : 0.0; }
  };

  EncoderOptions options_;
  std::vector<std::string> supis_;
  std::vector<std::string> prev1_;
  std::vector<std::string> prev2_;
  std::vector<std::string> categories_;
  Scale x_, y_, freq_;
};

}  // namespace nwtb::predict
