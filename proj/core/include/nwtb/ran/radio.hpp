#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "nwtb/domain/ids.hpp"

namespace nwtb::ran {

struct CellSite {
  CellId cell;
  Position position;
  double coverage_radius = 120.0;
  double threshold_dbm = -120.0;
};

struct RadioConfig {
  double dbm_per_unit = 1.0;
  double hysteresis_db = 3.0;
};

// Linear-in-distance received power: -dbm_per_unit * distance.
double rsrp(const CellSite& site, const Position& pos, const RadioConfig& cfg = {});

struct CellMeasurement {
  CellId cell;
  double dbm = 0.0;
};

// Strongest site at or above its threshold; ties go to the smallest cell id.
std::optional<CellMeasurement> best_cell(const Position& pos, std::span<const CellSite> sites,
                                         const RadioConfig& cfg = {});

struct Stay {};
struct HandoverTo {
  CellId target;
};
struct RadioLoss {};
using HandoverDecision = std::variant<Stay, HandoverTo, RadioLoss>;

// Hands over to the strongest non-serving site that beats the serving cell by
// more than the hysteresis margin and is itself in range; radio loss when no
// site is in range. `serving` must be one of `sites`.
HandoverDecision handover_decision(const CellId& serving, const Position& pos,
                                   std::span<const CellSite> sites, const RadioConfig& cfg = {});

// Throws std::invalid_argument naming the bad field.
void validate(const CellSite& site);
void validate(const RadioConfig& cfg);

}  // namespace nwtb::ran
