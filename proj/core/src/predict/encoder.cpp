#include "nwtb/predict/encoder.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nwtb::predict {
namespace {

template <typename Get>
std::vector<std::string> vocabulary(std::span<const FeatureRow> rows, Get get) {
  std::set<std::string> seen;
  for (const auto& r : rows) seen.insert(get(r.features));
  return {seen.begin(), seen.end()};
}

// Writes the one-hot block for `value`; returns false if it is unseen.
bool one_hot(const std::vector<std::string>& vocab, const std::string& value, std::vector<double>& out) {
  const auto offset = out.size();
  out.resize(offset + vocab.size(), 0.0);
  auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
  if (it == vocab.end() || *it != value) return false;
  out[offset + static_cast<std::size_t>(it - vocab.begin())] = 1.0;
  return true;
}

}  // namespace

void Encoder::fit(std::span<const FeatureRow> rows) {
  if (rows.empty()) throw std::invalid_argument("cannot fit encoder on zero rows");
  supis_ = options_.drop_supi ? std::vector<std::string>{}
                              : vocabulary(rows, [](const FeatureContext& f) { return f.supi.value; });
  prev1_ = vocabulary(rows, [](const FeatureContext& f) { return f.prev_cell_1; });
  prev2_ = vocabulary(rows, [](const FeatureContext& f) { return f.prev_cell_2; });
  categories_ = vocabulary(rows, [](const FeatureContext& f) { return std::string(to_string(f.time_category)); });

  auto fit_scale = [&](auto get) {
    Scale s{get(rows.front().features), get(rows.front().features)};
    for (const auto& r : rows) {
      s.min = std::min(s.min, get(r.features));
      s.max = std::max(s.max, get(r.features));
    }
    return s;
  };
  x_ = fit_scale([](const FeatureContext& f) { return f.cell_x; });
  y_ = fit_scale([](const FeatureContext& f) { return f.cell_y; });
  freq_ = fit_scale([](const FeatureContext& f) { return f.visit_frequency; });
}

std::size_t Encoder::width() const {
  return supis_.size() + prev1_.size() + prev2_.size() + categories_.size() + 3;
}

std::vector<double> Encoder::encode(const FeatureContext& f, std::size_t* unseen) const {
  std::vector<double> out;
  out.reserve(width());
  std::size_t missing = 0;
  if (!options_.drop_supi && !one_hot(supis_, f.supi.value, out)) ++missing;
  if (!one_hot(prev1_, f.prev_cell_1, out)) ++missing;
  if (!one_hot(prev2_, f.prev_cell_2, out)) ++missing;
  if (!one_hot(categories_, std::string(to_string(f.time_category)), out)) ++missing;
  out.push_back(x_.apply(f.cell_x));
  out.push_back(y_.apply(f.cell_y));
  out.push_back(freq_.apply(f.visit_frequency));
  if (unseen) *unseen += missing;
  return out;
}

Matrix Encoder::transform(std::span<const FeatureRow> rows, std::size_t* unseen) const {
  Matrix m;
  m.rows = rows.size();
  m.cols = width();
  m.data.reserve(m.rows * m.cols);
  for (const auto& r : rows) {
    const auto v = encode(r.features, unseen);
    m.data.insert(m.data.end(), v.begin(), v.end());
  }
  return m;
}

std::vector<std::string> Encoder::column_names() const {
  std::vector<std::string> names;
  for (const auto& v : supis_) names.push_back("supi=" + v);
  for (const auto& v : prev1_) names.push_back("prev_cell_1=" + v);
  for (const auto& v : prev2_) names.push_back("prev_cell_2=" + v);
  for (const auto& v : categories_) names.push_back("time_category=" + v);
  names.insert(names.end(), {"cell_x", "cell_y", "visit_frequency"});
  return names;
}

}  // namespace nwtb::predict
