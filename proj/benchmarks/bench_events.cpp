#include <benchmark/benchmark.h>

#include "nwtb/domain/event_json.hpp"
#include "nwtb/nwdaf/analytics.hpp"

using namespace nwtb;

namespace {

NetworkEvent sample_handover(double t) {
  return {EventKind::kHandover, {1740960000, t}, Supi{"imsi-001010000000001"},
          HandoverPayload{{"C1", 1}, {"C2", 2}}};
}

void BM_EncodeEvent(benchmark::State& state) {
  const auto e = sample_handover(3661.5);
  for (auto _ : state) benchmark::DoNotOptimize(to_canonical_string(e));
}
BENCHMARK(BM_EncodeEvent);

void BM_DecodeEvent(benchmark::State& state) {
  const auto text = to_canonical_string(sample_handover(3661.5));
  for (auto _ : state) benchmark::DoNotOptimize(event_from_json(nlohmann::json::parse(text)));
}
BENCHMARK(BM_DecodeEvent);

void BM_AnalyticsReport(benchmark::State& state) {
  std::vector<NetworkEvent> events;
  const auto n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    const Supi supi{"imsi-" + std::to_string(i % 8)};
    const double t = i * 10.0;
    if (i % 50 == 0) {
      events.push_back({EventKind::kRegistrationState, {0, t}, supi, RegistrationStatePayload{RmState::kRegistered}});
    } else if (i % 50 == 49) {
      events.push_back({EventKind::kRegistrationState, {0, t}, supi, RegistrationStatePayload{RmState::kDeregistered}});
    } else {
      events.push_back(sample_handover(t));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(nwdaf::compute_report(events, n * 10.0));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_AnalyticsReport)->Arg(10000)->Arg(100000);

}  // namespace
