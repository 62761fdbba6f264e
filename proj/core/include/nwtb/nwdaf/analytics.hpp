#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwtb/domain/event.hpp"

namespace nwtb::nwdaf {

// Registration (REGISTERED -> DEREGISTERED) intervals of one UE in offset
// seconds; an interval still open at the horizon ends there.
struct RegisteredInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  bool closed = true;  // ended by a deregistration
};

std::map<Supi, std::vector<RegisteredInterval>> registered_intervals(
    std::span<const NetworkEvent> events, double horizon_s);

struct StateDurations {
  std::optional<double> mean_active_s;
  std::optional<double> mean_inactive_s;
  std::size_t active_intervals = 0;
  std::size_t inactive_intervals = 0;

  friend bool operator==(const StateDurations&, const StateDurations&) = default;
};

struct HandoverStats {
  std::map<std::pair<std::string, std::string>, std::size_t> matrix;  // (source, target) cell ids
  std::array<std::size_t, 24> hourly{};                               // by wall-clock hour of day

  std::size_t total() const;
  friend bool operator==(const HandoverStats&, const HandoverStats&) = default;
};

struct CellDwell {
  double mean_s = 0.0;
  std::size_t visits = 0;

  friend bool operator==(const CellDwell&, const CellDwell&) = default;
};

struct AnalyticsReport {
  double horizon_s = 0.0;
  double bucket_s = 3600.0;
  // Index = bucket number from scenario start; value = UEs registered at
  // any point of the bucket.
  std::vector<std::size_t> active_ue_series;
  std::map<Supi, StateDurations> state_durations;
  HandoverStats handovers;
  std::map<std::string, CellDwell> dwell_per_cell;

  friend bool operator==(const AnalyticsReport&, const AnalyticsReport&) = default;
};

// Horizon used when none is given: the latest event offset (0 if none).
double default_horizon(std::span<const NetworkEvent> events);

std::vector<std::size_t> active_ue_series(std::span<const NetworkEvent> events, double horizon_s,
                                          double bucket_s = 3600.0);
// Active = registered intervals (open ones end at the horizon);
// inactive = gaps between a deregistration and the next registration.
std::map<Supi, StateDurations> state_duration_stats(std::span<const NetworkEvent> events,
                                                    double horizon_s);
HandoverStats handover_matrix(std::span<const NetworkEvent> events);
// Time from entering a cell (registration or handover in) to leaving it
// (handover out, deregistration, or the horizon), averaged per cell.
std::map<std::string, CellDwell> dwell_per_cell(std::span<const NetworkEvent> events,
                                                double horizon_s);

AnalyticsReport compute_report(std::span<const NetworkEvent> events, double horizon_s,
                               double bucket_s = 3600.0);

nlohmann::json to_json(const AnalyticsReport& report);

}  // namespace nwtb::nwdaf
