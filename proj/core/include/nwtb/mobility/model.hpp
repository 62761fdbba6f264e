#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nwtb/domain/ids.hpp"
#include "nwtb/domain/time.hpp"
#include "nwtb/mobility/rng.hpp"

namespace nwtb::mobility {

struct ActivityLocation {
  std::string name;
  Position position;
  std::string activity_type;  // home, work, park, coffee_shop, ...
  double dwell_mean_s = 600.0;
  double dwell_std_s = 0.0;
  std::optional<Supi> personal_owner;

  bool accessible_to(const Supi& ue) const { return !personal_owner || *personal_owner == ue; }
};

// Activity types that are personal (owned by exactly one UE).
bool is_personal_type(std::string_view activity_type);

using WeightMap = std::map<std::string, double>;
using ProbabilityMap = std::map<std::string, double>;

struct WeightTable {
  std::map<TimeCategory, WeightMap> by_category;

  const WeightMap& at(TimeCategory t) const;
};

struct MobilityProfile {
  double epsilon = 0.3;
  double v_min = 1.0;
  double v_max = 2.0;
  double dwell_floor_s = 60.0;
  // s(k, t); pairs not listed use 1.0.
  std::map<std::pair<std::string, TimeCategory>, double> speed_modifiers;

  double speed_modifier(const std::string& type, TimeCategory t) const;
  double max_speed_modifier() const;
};

// Throw std::invalid_argument describing the violated invariant.
void validate(const WeightTable& weights, std::span<const ActivityLocation> locations);
void validate(const MobilityProfile& profile);
void validate(const ActivityLocation& location);

// Multiplies the current type's weight by epsilon; others unchanged.
WeightMap adjusted_weights(const WeightMap& weights, const std::string& current_type, double epsilon);

// Normalizes weights into probabilities. Throws std::invalid_argument if
// the weights do not have a positive sum.
ProbabilityMap activity_probabilities(const WeightMap& weights);

// Categorical draw over `probabilities` (iterated in key order).
std::string sample_activity_type(Rng& rng, const ProbabilityMap& probabilities);

// Uniform choice among locations of `type` accessible to `ue`, excluding
// `current` (an index into `locations`). nullopt when none is eligible.
std::optional<std::size_t> select_destination(Rng& rng, const std::string& type,
                                              std::span<const ActivityLocation> locations,
                                              const Supi& ue, std::optional<std::size_t> current);

// v0 ~ U(v_min, v_max) scaled by s(type, t).
double sample_speed(Rng& rng, const MobilityProfile& profile, const std::string& type, TimeCategory t);

// atan2 heading in (-pi, pi]. Throws std::invalid_argument if from == to.
double heading(const Position& from, const Position& to);

// N(mean, std^2) truncated below at `floor` by rejection.
double sample_truncated_normal(Rng& rng, double mean, double stddev, double floor);

}  // namespace nwtb::mobility
