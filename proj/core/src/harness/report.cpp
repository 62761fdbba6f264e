#include "nwtb/harness/report.hpp"

#include <fstream>

#include <spdlog/spdlog.h>

#include "nwtb/harness/simulation.hpp"
#include "nwtb/nwdaf/event_store.hpp"

namespace nwtb::harness {
namespace {

std::ofstream open_csv(const std::filesystem::path& path, const char* header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  return out;
}

}  // namespace

ReportResult write_report(const std::filesystem::path& log_path, const std::filesystem::path& out_dir,
                          std::optional<std::filesystem::path> meta_path) {
  if (!std::filesystem::exists(log_path)) throw std::runtime_error("log not found: " + log_path.string());
  const auto replay = nwdaf::replay_log(log_path);
  std::vector<NetworkEvent> events;
  events.reserve(replay.events.size());
  for (const auto& s : replay.events) events.push_back(s.event);

  if (!meta_path) {
    const auto beside = log_path.parent_path() / kMetaFile;
    if (std::filesystem::exists(beside)) meta_path = beside;
  }
  std::optional<RunMeta> meta;
  if (meta_path) meta = read_run_meta(*meta_path);
  const double horizon = meta ? meta->duration_s : nwdaf::default_horizon(events);

  ReportResult result;
  result.total_lines = replay.total_lines;
  result.corrupt_lines = replay.corrupt_lines;
  if (result.corrupt_lines) {
    spdlog::warn("report: skipped {} of {} log lines", result.corrupt_lines, result.total_lines);
  }
  result.report = nwdaf::compute_report(events, horizon);
  const auto& r = result.report;

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "analytics.json");
    out << nwdaf::to_json(r).dump(2) << '\n';
  }
  {
    auto out = open_csv(out_dir / "active_ues.csv", "bucket,start_offset_s,start_utc,active_ues");
    for (std::size_t b = 0; b < r.active_ue_series.size(); ++b) {
      const double start = static_cast<double>(b) * r.bucket_s;
      out << b << ',' << start << ',';
      if (meta) out << SimInstant{meta->start_epoch_s, start}.utc();
      out << ',' << r.active_ue_series[b] << '\n';
    }
  }
  {
    auto out = open_csv(out_dir / "state_durations.csv",
                        "supi,mean_active_min,mean_inactive_min,active_intervals,inactive_intervals");
    for (const auto& [supi, d] : r.state_durations) {
      out << supi.value << ',';
      if (d.mean_active_s) out << *d.mean_active_s / 60.0;
      out << ',';
      if (d.mean_inactive_s) out << *d.mean_inactive_s / 60.0;
      out << ',' << d.active_intervals << ',' << d.inactive_intervals << '\n';
    }
  }
  {
    auto out = open_csv(out_dir / "handover_matrix.csv", "source,target,count");
    for (const auto& [pair, count] : r.handovers.matrix) out << pair.first << ',' << pair.second << ',' << count << '\n';
  }
  {
    auto out = open_csv(out_dir / "handover_hourly.csv", "hour,count");
    for (std::size_t h = 0; h < r.handovers.hourly.size(); ++h) out << h << ',' << r.handovers.hourly[h] << '\n';
  }
  {
    auto out = open_csv(out_dir / "dwell_per_cell.csv", "cell,mean_dwell_s,visits");
    for (const auto& [cell, d] : r.dwell_per_cell) out << cell << ',' << d.mean_s << ',' << d.visits << '\n';
  }
  return result;
}

}  // namespace nwtb::harness
