#include <benchmark/benchmark.h>

#include <random>

#include "nwtb/predict/classifier.hpp"

using namespace nwtb::predict;

namespace {

struct Data {
  Matrix x;
  std::vector<int> y;
};

Data random_data(std::size_t rows, std::size_t cols, int classes) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Data d{{rows, cols, {}}, {}};
  for (std::size_t i = 0; i < rows * cols; ++i) d.x.data.push_back(u(rng));
  for (std::size_t i = 0; i < rows; ++i) d.y.push_back(static_cast<int>(rng() % classes));
  return d;
}

void BM_DecisionTreeFit(benchmark::State& state) {
  const auto d = random_data(static_cast<std::size_t>(state.range(0)), 20, 4);
  for (auto _ : state) {
    DecisionTree tree;
    tree.fit(d.x, d.y, 4);
    benchmark::DoNotOptimize(tree.nodes().size());
  }
}
BENCHMARK(BM_DecisionTreeFit)->Arg(500)->Arg(5000);

void BM_KnnPredict(benchmark::State& state) {
  const auto d = random_data(static_cast<std::size_t>(state.range(0)), 20, 4);
  Knn knn;
  knn.fit(d.x, d.y, 4);
  for (auto _ : state) benchmark::DoNotOptimize(knn.predict(d.x.row(0)));
}
BENCHMARK(BM_KnnPredict)->Arg(500)->Arg(5000);

#if NWTB_ENABLE_ENSEMBLES
void BM_GradientBoostingFit(benchmark::State& state) {
  const auto d = random_data(500, 20, 4);
  for (auto _ : state) {
    GradientBoosting gb(BoostingParams{20, 6, 0.1, 64});
    gb.fit(d.x, d.y, 4);
  }
}
BENCHMARK(BM_GradientBoostingFit)->Unit(benchmark::kMillisecond);
#endif

}  // namespace
