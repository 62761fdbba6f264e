#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nwtb/harness/scenario.hpp"
#include "nwtb/nwdaf/nwdaf.hpp"
#include "nwtb/predict/features.hpp"

namespace nwtb::harness {

struct RunOptions {
  std::optional<sba::TransportKind> transport;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> output_dir;
};

struct RunSummary {
  std::map<std::string, std::uint64_t> events_emitted;  // by kind
  std::uint64_t events_emitted_total = 0;
  std::uint64_t notifications_dispatched = 0;
  std::uint64_t events_collected = 0;
  std::uint64_t notification_failures = 0;
  std::uint64_t notification_retries = 0;
  std::uint64_t ticks = 0;
  std::uint64_t dataset_rows = 0;
  double runtime_wall_s = 0.0;
  std::string transport;
  std::uint64_t seed = 0;
  nwdaf::NwdafMetrics nwdaf_metrics;
  sba::TransportStats transport_stats;
  std::filesystem::path log_path;
  std::filesystem::path meta_path;
  std::filesystem::path dataset_path;
  std::filesystem::path analytics_path;
  std::filesystem::path summary_path;
};

nlohmann::json to_json(const RunSummary& summary);

// Run description written next to the log so offline tools know the clock
// origin, horizon and cell layout.
struct RunMeta {
  std::string start_utc;
  std::int64_t start_epoch_s = 0;
  double duration_s = 0.0;
  double tick_dt_s = 1.0;
  std::uint64_t seed = 0;
  predict::CellGeometry cells;
};

nlohmann::json to_json(const RunMeta& meta);
RunMeta run_meta_from_json(const nlohmann::json& j);
void write_run_meta(const std::filesystem::path& path, const RunMeta& meta);
RunMeta read_run_meta(const std::filesystem::path& path);

inline constexpr const char* kLogFile = "events.ndjson";
inline constexpr const char* kMetaFile = "meta.json";
inline constexpr const char* kDatasetFile = "dataset.csv";
inline constexpr const char* kAnalyticsFile = "analytics.json";
inline constexpr const char* kSummaryFile = "run_summary.json";

// Wires registry, AMF, SMF and NWDAF over the chosen transport, drives the
// UEs tick by tick and writes the artifacts into the output directory.
// Startup failures throw before the clock starts.
RunSummary run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace nwtb::harness
