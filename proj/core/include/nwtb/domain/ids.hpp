#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace nwtb {

// Subscription permanent identifier, e.g. "imsi-208930000000001".
struct Supi {
  std::string value;

  bool empty() const noexcept { return value.empty(); }
  friend auto operator<=>(const Supi&, const Supi&) = default;
};

struct CellId {
  std::string id;
  std::int64_t tac = 0;

  friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  bool finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }
  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) noexcept {
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace nwtb
