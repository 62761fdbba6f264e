#include "nwtb/ran/radio.hpp"

#include <algorithm>
#include <stdexcept>

namespace nwtb::ran {
namespace {

bool in_range(const CellSite& site, double dbm) { return dbm >= site.threshold_dbm; }

// Stronger signal wins, then the lexicographically smaller cell id.
bool better(const CellMeasurement& a, const CellMeasurement& b) {
  if (a.dbm != b.dbm) return a.dbm > b.dbm;
  return a.cell.id < b.cell.id;
}

}  // namespace

double rsrp(const CellSite& site, const Position& pos, const RadioConfig& cfg) {
  return -cfg.dbm_per_unit * distance(site.position, pos);
}

std::optional<CellMeasurement> best_cell(const Position& pos, std::span<const CellSite> sites,
                                         const RadioConfig& cfg) {
  std::optional<CellMeasurement> best;
  for (const auto& site : sites) {
    const CellMeasurement m{site.cell, rsrp(site, pos, cfg)};
    if (!in_range(site, m.dbm)) continue;
    if (!best || better(m, *best)) best = m;
  }
  return best;
}

HandoverDecision handover_decision(const CellId& serving, const Position& pos,
                                   std::span<const CellSite> sites, const RadioConfig& cfg) {
  const auto serving_it = std::find_if(sites.begin(), sites.end(),
                                       [&](const CellSite& s) { return s.cell == serving; });
  if (serving_it == sites.end()) throw std::invalid_argument("serving cell is not a known site");
  const double serving_dbm = rsrp(*serving_it, pos, cfg);

  bool any_in_range = false;
  std::optional<CellMeasurement> target;
  for (const auto& site : sites) {
    const CellMeasurement m{site.cell, rsrp(site, pos, cfg)};
    if (!in_range(site, m.dbm)) continue;
    any_in_range = true;
    if (site.cell == serving) continue;
    if (m.dbm > serving_dbm + cfg.hysteresis_db && (!target || better(m, *target))) target = m;
  }
  if (!any_in_range) return RadioLoss{};
  if (target) return HandoverTo{target->cell};
  return Stay{};
}

void validate(const CellSite& site) {
  if (site.cell.id.empty()) throw std::invalid_argument("cell id must be non-empty");
  if (!site.position.finite()) throw std::invalid_argument("cell position must be finite");
  if (!(site.coverage_radius > 0.0)) throw std::invalid_argument("coverage_radius must be > 0");
  if (!(site.threshold_dbm < 0.0)) throw std::invalid_argument("threshold_dbm must be < 0");
}

void validate(const RadioConfig& cfg) {
  if (!(cfg.dbm_per_unit > 0.0)) throw std::invalid_argument("dbm_per_unit must be > 0");
  if (!(cfg.hysteresis_db >= 0.0)) throw std::invalid_argument("hysteresis_db must be >= 0");
}

}  // namespace nwtb::ran
