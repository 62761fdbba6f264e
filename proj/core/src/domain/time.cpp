#include "nwtb/domain/time.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace nwtb {
namespace {

constexpr std::int64_t kSecondsPerDay = 86'400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

std::string format_utc_ms(std::int64_t epoch_ms) {
  using namespace std::chrono;
  const std::int64_t secs = floor_div(epoch_ms, 1000);
  const int millis = static_cast<int>(epoch_ms - secs * 1000);
  const std::int64_t days = floor_div(secs, kSecondsPerDay);
  const std::int64_t sod = secs - days * kSecondsPerDay;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(sod / 3600), static_cast<int>((sod / 60) % 60),
                static_cast<int>(sod % 60), millis);
  return buf;
}

std::optional<std::int64_t> parse_utc_ms(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS[.fff]Z
  if (text.size() < 20 || text.back() != 'Z') return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  const auto yy = text.substr(0, 4), mo = text.substr(5, 2), dd = text.substr(8, 2);
  const auto hh = text.substr(11, 2), mi = text.substr(14, 2), ss = text.substr(17, 2);
  for (auto part : {yy, mo, dd, hh, mi, ss}) {
    if (!all_digits(part)) return std::nullopt;
  }
  int millis = 0;
  const auto rest = text.substr(19, text.size() - 20);
  if (!rest.empty()) {
    if (rest.size() != 4 || rest[0] != '.' || !all_digits(rest.substr(1))) return std::nullopt;
    millis = to_int(rest.substr(1));
  }
  using namespace std::chrono;
  const year_month_day ymd{year{to_int(yy)}, month{static_cast<unsigned>(to_int(mo))},
                           day{static_cast<unsigned>(to_int(dd))}};
  if (!ymd.ok() || to_int(hh) > 23 || to_int(mi) > 59 || to_int(ss) > 59) return std::nullopt;
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t secs =
      days * kSecondsPerDay + to_int(hh) * 3600 + to_int(mi) * 60 + to_int(ss);
  return secs * 1000 + millis;
}

std::optional<std::int64_t> parse_utc_seconds(std::string_view text) {
  const auto ms = parse_utc_ms(text);
  if (!ms || *ms % 1000 != 0) return std::nullopt;
  return *ms / 1000;
}

std::string SimInstant::utc() const {
  const auto offset_ms = static_cast<std::int64_t>(std::llround(offset_s * 1000.0));
  return format_utc_ms(start_epoch_s * 1000 + offset_ms);
}

double SimInstant::seconds_of_day() const {
  const double whole = std::floor(offset_s);
  const std::int64_t secs = start_epoch_s + static_cast<std::int64_t>(whole);
  const std::int64_t sod = secs - floor_div(secs, kSecondsPerDay) * kSecondsPerDay;
  return static_cast<double>(sod) + (offset_s - whole);
}

int SimInstant::hour_of_day() const { return static_cast<int>(seconds_of_day() / 3600.0); }

TimeCategory time_category_of_hour(int hour) {
  if (hour >= 6 && hour < 11) return TimeCategory::kMorning;
  if (hour >= 11 && hour < 14) return TimeCategory::kLunch;
  if (hour >= 14 && hour < 18) return TimeCategory::kAfternoon;
  if (hour >= 18 && hour < 22) return TimeCategory::kEvening;
  return TimeCategory::kNight;
}

TimeCategory time_category_of(const SimInstant& instant) {
  return time_category_of_hour(instant.hour_of_day());
}

std::string_view to_string(TimeCategory category) {
  switch (category) {
    case TimeCategory::kMorning: return "morning";
    case TimeCategory::kLunch: return "lunch";
    case TimeCategory::kAfternoon: return "afternoon";
    case TimeCategory::kEvening: return "evening";
    case TimeCategory::kNight: return "night";
  }
  return "night";
}

std::optional<TimeCategory> parse_time_category(std::string_view name) {
  for (auto c : kAllTimeCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

}  // namespace nwtb
