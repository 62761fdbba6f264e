#include <benchmark/benchmark.h>

#include <filesystem>

#include "nwtb/harness/scenario.hpp"
#include "nwtb/harness/simulation.hpp"

namespace {

void BM_SimulatedHour(benchmark::State& state) {
  auto sc = nwtb::harness::load_scenario(NWTB_SCENARIO_DIR "/default.yaml");
  sc.duration_s = 3600;
  const auto out = std::filesystem::temp_directory_path() / "nwtb-bench";
  std::uint64_t events = 0;
  for (auto _ : state) events += nwtb::harness::run(sc, {std::nullopt, std::nullopt, out}).events_collected;
  state.counters["ticks/s"] = benchmark::Counter(static_cast<double>(state.iterations() * 3600),
                                                 benchmark::Counter::kIsRate);
  state.counters["events"] = static_cast<double>(events / state.iterations());
}
BENCHMARK(BM_SimulatedHour)->Unit(benchmark::kMillisecond);

}  // namespace
