#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nwtb/domain/ids.hpp"
#include "nwtb/domain/time.hpp"
#include "nwtb/mobility/model.hpp"

namespace nwtb::mobility {

enum class UeMode { kAlwaysOn, kDynamic };

struct NormalDuration {
  double mean_s = 0.0;
  double std_s = 0.0;
};

struct UeBehavior {
  Supi supi;
  UeMode mode = UeMode::kDynamic;
  NormalDuration on_duration{101.0 * 60.0, 5.0 * 60.0};
  NormalDuration off_duration{38.5 * 60.0, 2.0 * 60.0};
  // Lower bound for sampled on/off durations.
  double duration_floor_s = 60.0;
  std::size_t home = 0;  // index into the world's locations
  std::optional<std::size_t> work;
  // Scripted mode: visit these locations cyclically instead of sampling.
  std::vector<std::size_t> itinerary;
};

// Everything the agents share. Must outlive them.
struct MobilityWorld {
  std::vector<ActivityLocation> locations;
  WeightTable weights;
  MobilityProfile profile;
};

struct Moving {
  std::size_t destination = 0;
  double speed = 0.0;
  double heading = 0.0;
};

struct Dwelling {
  double remaining_s = 0.0;
};

enum class PowerChange { kNone, kAttach, kDetach };
enum class StepResult { kMoved, kArrived };

// One UE's activity-based mobility plus its attach/detach schedule. The UE
// starts attached and dwelling at home. While detached it neither moves nor
// counts down its dwell.
class UeAgent {
 public:
  UeAgent(UeBehavior behavior, const MobilityWorld& world, std::uint64_t seed,
          std::int64_t start_epoch_s = 0);

  // For DYNAMIC UEs, toggles attachment once the current on/off interval
  // has elapsed and samples the next one. ALWAYS_ON UEs never change.
  PowerChange attach_detach_tick(double now_s);

  // Advances motion by dt at simulated time now_s: counts down a dwell (and
  // picks the next destination when it ends) or steps toward the destination.
  void advance(double now_s, double dt);

  // Moves along the current heading; clamps to the destination on arrival
  // and starts dwelling there. Requires the MOVING state.
  StepResult step(double dt);

  // Selects the next destination at `now_s` and starts moving toward it.
  // Stays dwelling if no destination is eligible.
  void choose_next(double now_s);

  const Supi& supi() const { return behavior_.supi; }
  const UeBehavior& behavior() const { return behavior_; }
  const Position& position() const { return position_; }
  std::size_t current_location() const { return current_location_; }
  bool attached() const { return attached_; }
  bool moving() const { return std::holds_alternative<Moving>(motion_); }
  const std::variant<Moving, Dwelling>& motion() const { return motion_; }
  double next_toggle_s() const { return next_toggle_s_; }
  Rng& rng() { return rng_; }

 private:
  double sample_duration(const NormalDuration& d);
  void start_dwell(std::size_t location);

  UeBehavior behavior_;
  const MobilityWorld& world_;
  Rng rng_;
  std::int64_t start_epoch_s_;
  Position position_;
  std::size_t current_location_;
  std::size_t itinerary_pos_ = 0;
  std::variant<Moving, Dwelling> motion_;
  bool attached_ = true;
  double next_toggle_s_ = 0.0;
};

}  // namespace nwtb::mobility
