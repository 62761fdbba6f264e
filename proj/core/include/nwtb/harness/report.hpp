#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "nwtb/nwdaf/analytics.hpp"

namespace nwtb::harness {

struct ReportResult {
  nwdaf::AnalyticsReport report;
  std::size_t total_lines = 0;
  std::size_t corrupt_lines = 0;
  // More than 1% of the log's lines failed to parse.
  bool too_corrupt() const { return corrupt_lines * 100 > total_lines; }
};

// Replays the log and writes analytics.json plus plot-ready CSVs:
// active_ues.csv, state_durations.csv, handover_matrix.csv,
// handover_hourly.csv and dwell_per_cell.csv. The horizon comes from
// `meta_path` (default: meta.json beside the log) or, without one, the last
// event.
ReportResult write_report(const std::filesystem::path& log_path, const std::filesystem::path& out_dir,
                          std::optional<std::filesystem::path> meta_path = std::nullopt);

}  // namespace nwtb::harness
