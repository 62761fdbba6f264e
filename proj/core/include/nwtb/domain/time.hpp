#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nwtb {

// A point on the simulated clock: an offset from the scenario start plus
// the calendar instant of that start (whole seconds since the Unix epoch).
struct SimInstant {
  std::int64_t start_epoch_s = 0;
  double offset_s = 0.0;

  // Calendar time as ISO-8601 UTC with millisecond precision.
  std::string utc() const;
  // Seconds since local midnight (UTC) of the wall clock at this instant.
  double seconds_of_day() const;
  int hour_of_day() const;

  friend bool operator==(const SimInstant&, const SimInstant&) = default;
};

// Parses "YYYY-MM-DDTHH:MM:SS[.fff]Z" into milliseconds since the epoch.
std::optional<std::int64_t> parse_utc_ms(std::string_view text);
// Parses a whole-second ISO-8601 UTC timestamp into epoch seconds.
std::optional<std::int64_t> parse_utc_seconds(std::string_view text);
std::string format_utc_ms(std::int64_t epoch_ms);

enum class TimeCategory { kMorning, kLunch, kAfternoon, kEvening, kNight };

inline constexpr std::array<TimeCategory, 5> kAllTimeCategories = {
    TimeCategory::kMorning, TimeCategory::kLunch, TimeCategory::kAfternoon,
    TimeCategory::kEvening, TimeCategory::kNight};

// morning [06,11), lunch [11,14), afternoon [14,18), evening [18,22), night otherwise.
TimeCategory time_category_of(const SimInstant& instant);
TimeCategory time_category_of_hour(int hour);
std::string_view to_string(TimeCategory category);
std::optional<TimeCategory> parse_time_category(std::string_view name);

// Shared simulated clock. The simulation loop advances it; services read it
// (possibly from transport threads) to stamp receipts.
class SimClock {
 public:
  explicit SimClock(std::int64_t start_epoch_s = 0) : start_epoch_s_(start_epoch_s) {}

  SimInstant now() const { return {start_epoch_s_, offset_.load(std::memory_order_acquire)}; }
  SimInstant at(double offset_s) const { return {start_epoch_s_, offset_s}; }
  void set(double offset_s) { offset_.store(offset_s, std::memory_order_release); }
  std::int64_t start_epoch_s() const { return start_epoch_s_; }

 private:
  std::int64_t start_epoch_s_;
  std::atomic<double> offset_{0.0};
};

}  // namespace nwtb
