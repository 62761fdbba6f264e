#include "nwtb/nwdaf/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace nwtb::nwdaf {

std::size_t HandoverStats::total() const {
  std::size_t n = 0;
  for (const auto& [_, c] : matrix) n += c;
  return n;
}

double default_horizon(std::span<const NetworkEvent> events) {
  double h = 0.0;
  for (const auto& e : events) h = std::max(h, e.timestamp.offset_s);
  return h;
}

std::map<Supi, std::vector<RegisteredInterval>> registered_intervals(
    std::span<const NetworkEvent> events, double horizon_s) {
  std::map<Supi, std::vector<RegisteredInterval>> out;
  std::map<Supi, double> open;
  for (const auto& e : events) {
    const auto* reg = e.as<RegistrationStatePayload>();
    if (!reg) continue;
    if (reg->state == RmState::kRegistered) {
      open.try_emplace(e.supi, e.timestamp.offset_s);
    } else if (auto it = open.find(e.supi); it != open.end()) {
      out[e.supi].push_back({it->second, e.timestamp.offset_s, true});
      open.erase(it);
    }
  }
  for (const auto& [supi, start] : open) {
    out[supi].push_back({start, std::max(start, horizon_s), false});
  }
  return out;
}

std::vector<std::size_t> active_ue_series(std::span<const NetworkEvent> events, double horizon_s,
                                          double bucket_s) {
  const auto buckets = static_cast<std::size_t>(std::ceil(horizon_s / bucket_s));
  std::vector<std::size_t> series(buckets, 0);
  for (const auto& [_, intervals] : registered_intervals(events, horizon_s)) {
    std::vector<bool> hit(buckets, false);
    for (const auto& iv : intervals) {
      if (!(iv.end_s > iv.start_s)) continue;
      const auto first = static_cast<std::size_t>(std::floor(iv.start_s / bucket_s));
      const auto last = static_cast<std::size_t>(std::ceil(iv.end_s / bucket_s));
      for (std::size_t b = first; b < last && b < buckets; ++b) hit[b] = true;
    }
    for (std::size_t b = 0; b < buckets; ++b) series[b] += hit[b] ? 1 : 0;
  }
  return series;
}

std::map<Supi, StateDurations> state_duration_stats(std::span<const NetworkEvent> events,
                                                    double horizon_s) {
  std::map<Supi, StateDurations> out;
  for (const auto& [supi, intervals] : registered_intervals(events, horizon_s)) {
    StateDurations d;
    double active = 0.0, inactive = 0.0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      active += intervals[i].end_s - intervals[i].start_s;
      ++d.active_intervals;
      if (i + 1 < intervals.size()) {
        inactive += intervals[i + 1].start_s - intervals[i].end_s;
        ++d.inactive_intervals;
      }
    }
    if (d.active_intervals) d.mean_active_s = active / static_cast<double>(d.active_intervals);
    if (d.inactive_intervals) d.mean_inactive_s = inactive / static_cast<double>(d.inactive_intervals);
    out[supi] = d;
  }
  return out;
}

HandoverStats handover_matrix(std::span<const NetworkEvent> events) {
  HandoverStats stats;
  for (const auto& e : events) {
    const auto* h = e.as<HandoverPayload>();
    if (!h) continue;
    ++stats.matrix[{h->source.id, h->target.id}];
    ++stats.hourly[static_cast<std::size_t>(e.timestamp.hour_of_day())];
  }
  return stats;
}

std::map<std::string, CellDwell> dwell_per_cell(std::span<const NetworkEvent> events,
                                                double horizon_s) {
  struct Open {
    std::string cell;
    double since;
  };
  std::map<Supi, Open> open;
  std::map<std::string, std::pair<double, std::size_t>> sums;
  auto close = [&](const Supi& supi, double at) {
    auto it = open.find(supi);
    if (it == open.end()) return;
    auto& s = sums[it->second.cell];
    s.first += std::max(0.0, at - it->second.since);
    s.second += 1;
    open.erase(it);
  };

  for (const auto& e : events) {
    const double t = e.timestamp.offset_s;
    if (const auto* loc = e.as<LocationReportPayload>()) {
      auto it = open.find(e.supi);
      if (it != open.end() && it->second.cell == loc->cell.id) continue;
      close(e.supi, t);
      open[e.supi] = {loc->cell.id, t};
    } else if (const auto* h = e.as<HandoverPayload>()) {
      close(e.supi, t);
      open[e.supi] = {h->target.id, t};
    } else if (const auto* r = e.as<RegistrationStatePayload>();
               r && r->state == RmState::kDeregistered) {
      close(e.supi, t);
    }
  }
  for (const auto& [supi, _] : std::map<Supi, Open>(open)) close(supi, horizon_s);

  std::map<std::string, CellDwell> out;
  for (const auto& [cell, s] : sums) {
    out[cell] = {s.second ? s.first / static_cast<double>(s.second) : 0.0, s.second};
  }
  return out;
}

AnalyticsReport compute_report(std::span<const NetworkEvent> events, double horizon_s,
                               double bucket_s) {
  AnalyticsReport r;
  r.horizon_s = horizon_s;
  r.bucket_s = bucket_s;
  r.active_ue_series = active_ue_series(events, horizon_s, bucket_s);
  r.state_durations = state_duration_stats(events, horizon_s);
  r.handovers = handover_matrix(events);
  r.dwell_per_cell = dwell_per_cell(events, horizon_s);
  return r;
}

nlohmann::json to_json(const AnalyticsReport& report) {
  nlohmann::json j;
  j["horizon_s"] = report.horizon_s;
  j["bucket_s"] = report.bucket_s;
  j["active_ue_series"] = report.active_ue_series;
  auto& states = j["state_durations"] = nlohmann::json::object();
  for (const auto& [supi, d] : report.state_durations) {
    states[supi.value] = {
        {"mean_active_s", d.mean_active_s ? nlohmann::json(*d.mean_active_s) : nlohmann::json()},
        {"mean_inactive_s", d.mean_inactive_s ? nlohmann::json(*d.mean_inactive_s) : nlohmann::json()},
        {"active_intervals", d.active_intervals},
        {"inactive_intervals", d.inactive_intervals}};
  }
  auto& matrix = j["handover_matrix"] = nlohmann::json::array();
  for (const auto& [pair, count] : report.handovers.matrix) {
    matrix.push_back({{"source", pair.first}, {"target", pair.second}, {"count", count}});
  }
  j["hourly_handovers"] = report.handovers.hourly;
  auto& dwell = j["dwell_per_cell"] = nlohmann::json::object();
  for (const auto& [cell, d] : report.dwell_per_cell) {
    dwell[cell] = {{"mean_s", d.mean_s}, {"visits", d.visits}};
  }
  return j;
}

}  // namespace nwtb::nwdaf
