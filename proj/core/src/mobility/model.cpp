#include "nwtb/mobility/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nwtb::mobility {

bool is_personal_type(std::string_view activity_type) {
  return activity_type == "home" || activity_type == "work";
}

const WeightMap& WeightTable::at(TimeCategory t) const {
  auto it = by_category.find(t);
  if (it == by_category.end()) {
    throw std::invalid_argument("no weights for time category " + std::string(to_string(t)));
  }
  return it->second;
}

double MobilityProfile::speed_modifier(const std::string& type, TimeCategory t) const {
  auto it = speed_modifiers.find({type, t});
  return it == speed_modifiers.end() ? 1.0 : it->second;
}

double MobilityProfile::max_speed_modifier() const {
  double m = 1.0;
  for (const auto& [_, s] : speed_modifiers) m = std::max(m, s);
  return m;
}

void validate(const ActivityLocation& location) {
  if (location.name.empty()) throw std::invalid_argument("location name must be non-empty");
  if (!location.position.finite()) throw std::invalid_argument("location " + location.name + ": position must be finite");
  if (!(location.dwell_mean_s > 0.0)) throw std::invalid_argument("location " + location.name + ": dwell_mean_s must be > 0");
  if (!(location.dwell_std_s >= 0.0)) throw std::invalid_argument("location " + location.name + ": dwell_std_s must be >= 0");
  const bool personal = is_personal_type(location.activity_type);
  if (personal && !location.personal_owner) {
    throw std::invalid_argument("location " + location.name + ": personal location needs an owner");
  }
  if (!personal && location.personal_owner) {
    throw std::invalid_argument("location " + location.name + ": public location cannot have an owner");
  }
}

void validate(const WeightTable& weights, std::span<const ActivityLocation> locations) {
  for (auto t : kAllTimeCategories) {
    const auto& w = weights.at(t);
    bool positive = false;
    for (const auto& [type, value] : w) {
      if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument("weight for " + type + " must be finite and >= 0");
      }
      positive = positive || value > 0.0;
      const bool exists = std::any_of(locations.begin(), locations.end(), [&](const ActivityLocation& l) {
        return l.activity_type == type;
      });
      if (!exists) throw std::invalid_argument("weights reference unknown activity type '" + type + "'");
    }
    if (!positive) {
      throw std::invalid_argument("time category " + std::string(to_string(t)) + " has no positive weight");
    }
  }
}

void validate(const MobilityProfile& profile) {
  if (!(profile.epsilon > 0.0 && profile.epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (!(profile.v_min > 0.0 && profile.v_min <= profile.v_max)) {
    throw std::invalid_argument("speeds must satisfy 0 < v_min <= v_max");
  }
  if (!(profile.dwell_floor_s > 0.0)) throw std::invalid_argument("dwell_floor_s must be > 0");
  for (const auto& [key, s] : profile.speed_modifiers) {
    if (!(s > 0.0)) throw std::invalid_argument("speed modifier for " + key.first + " must be > 0");
  }
}

WeightMap adjusted_weights(const WeightMap& weights, const std::string& current_type, double epsilon) {
  WeightMap out = weights;
  if (auto it = out.find(current_type); it != out.end()) it->second *= epsilon;
  return out;
}

ProbabilityMap activity_probabilities(const WeightMap& weights) {
  double total = 0.0;
  for (const auto& [_, w] : weights) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("activity weights must have a positive sum");
  ProbabilityMap p;
  for (const auto& [type, w] : weights) p[type] = w / total;
  return p;
}

std::string sample_activity_type(Rng& rng, const ProbabilityMap& probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("empty probability map");
  const double u = uniform01(rng);
  double cumulative = 0.0;
  const std::string* last_positive = nullptr;
  for (const auto& [type, p] : probabilities) {
    if (p <= 0.0) continue;
    last_positive = &type;
    cumulative += p;
    if (u < cumulative) return type;
  }
  // Rounding left u above the final cumulative sum.
  return last_positive ? *last_positive : probabilities.begin()->first;
}

std::optional<std::size_t> select_destination(Rng& rng, const std::string& type,
                                              std::span<const ActivityLocation> locations,
                                              const Supi& ue, std::optional<std::size_t> current) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (current && *current == i) continue;
    if (locations[i].activity_type == type && locations[i].accessible_to(ue)) eligible.push_back(i);
  }
  if (eligible.empty()) return std::nullopt;
  return eligible[uniform_index(rng, eligible.size())];
}

double sample_speed(Rng& rng, const MobilityProfile& profile, const std::string& type, TimeCategory t) {
  const double v0 = profile.v_min == profile.v_max ? profile.v_min : uniform(rng, profile.v_min, profile.v_max);
  return v0 * profile.speed_modifier(type, t);
}

double heading(const Position& from, const Position& to) {
  if (from == to) throw std::invalid_argument("heading undefined: already at destination");
  const double theta = std::atan2(to.y - from.y, to.x - from.x);
  return theta == -std::numbers::pi ? std::numbers::pi : theta;
}

double sample_truncated_normal(Rng& rng, double mean, double stddev, double floor) {
  if (stddev <= 0.0) return std::max(mean, floor);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = normal(rng, mean, stddev);
    if (x >= floor) return x;
  }
  return floor;
}

}  // namespace nwtb::mobility
