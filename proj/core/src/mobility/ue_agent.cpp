#include "nwtb/mobility/ue_agent.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nwtb::mobility {

UeAgent::UeAgent(UeBehavior behavior, const MobilityWorld& world, std::uint64_t seed,
                 std::int64_t start_epoch_s)
    : behavior_(std::move(behavior)),
      world_(world),
      rng_(seed),
      start_epoch_s_(start_epoch_s),
      current_location_(behavior_.home) {
  if (behavior_.home >= world_.locations.size()) throw std::invalid_argument("home location out of range");
  position_ = world_.locations[behavior_.home].position;
  start_dwell(behavior_.home);
  if (behavior_.mode == UeMode::kDynamic) {
    next_toggle_s_ = sample_duration(behavior_.on_duration);
  } else {
    next_toggle_s_ = std::numeric_limits<double>::infinity();
  }
}

double UeAgent::sample_duration(const NormalDuration& d) {
  return sample_truncated_normal(rng_, d.mean_s, d.std_s, behavior_.duration_floor_s);
}

void UeAgent::start_dwell(std::size_t location) {
  const auto& loc = world_.locations[location];
  current_location_ = location;
  motion_ = Dwelling{sample_truncated_normal(rng_, loc.dwell_mean_s, loc.dwell_std_s,
                                             world_.profile.dwell_floor_s)};
}

PowerChange UeAgent::attach_detach_tick(double now_s) {
  if (behavior_.mode == UeMode::kAlwaysOn || now_s < next_toggle_s_) return PowerChange::kNone;
  attached_ = !attached_;
  next_toggle_s_ = now_s + sample_duration(attached_ ? behavior_.on_duration : behavior_.off_duration);
  return attached_ ? PowerChange::kAttach : PowerChange::kDetach;
}

void UeAgent::advance(double now_s, double dt) {
  if (!attached_) return;
  if (auto* dwell = std::get_if<Dwelling>(&motion_)) {
    dwell->remaining_s -= dt;
    if (dwell->remaining_s <= 0.0) choose_next(now_s);
    return;
  }
  step(dt);
}

void UeAgent::choose_next(double now_s) {
  const SimInstant at{start_epoch_s_, now_s};
  const auto category = time_category_of(at);
  std::optional<std::size_t> dest;

  if (!behavior_.itinerary.empty()) {
    itinerary_pos_ = (itinerary_pos_ + 1) % behavior_.itinerary.size();
    dest = behavior_.itinerary[itinerary_pos_];
    if (*dest == current_location_) dest.reset();
  } else {
    const auto& current_type = world_.locations[current_location_].activity_type;
    auto weights = adjusted_weights(world_.weights.at(category), current_type, world_.profile.epsilon);
    // A sampled type with no eligible location is removed and the draw repeated.
    while (!dest) {
      double total = 0.0;
      for (const auto& [_, w] : weights) total += w;
      if (!(total > 0.0)) break;
      const auto type = sample_activity_type(rng_, activity_probabilities(weights));
      dest = select_destination(rng_, type, world_.locations, behavior_.supi, current_location_);
      if (!dest) weights[type] = 0.0;
    }
  }

  if (!dest) {
    start_dwell(current_location_);
    return;
  }
  const auto& target = world_.locations[*dest];
  if (target.position == position_) {
    start_dwell(*dest);
    return;
  }
  motion_ = Moving{*dest, sample_speed(rng_, world_.profile, target.activity_type, category),
                   heading(position_, target.position)};
}

StepResult UeAgent::step(double dt) {
  auto* moving = std::get_if<Moving>(&motion_);
  if (!moving) throw std::logic_error("step() requires a moving UE");
  const auto& dest = world_.locations[moving->destination].position;
  const double travel = moving->speed * dt;
  if (distance(position_, dest) <= travel) {
    position_ = dest;
    start_dwell(moving->destination);
    return StepResult::kArrived;
  }
  position_.x += travel * std::cos(moving->heading);
  position_.y += travel * std::sin(moving->heading);
  return StepResult::kMoved;
}

}  // namespace nwtb::mobility
