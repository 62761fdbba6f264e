#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "nwtb/domain/event.hpp"

namespace nwtb {

// Canonical JSON encoding of events. Top-level fields are exactly
// kind, timestamp, supi and payload; timestamp is {"utc", "offset_s"}.
// nlohmann::json keeps object keys sorted, so dump() is canonical.
nlohmann::json to_json(const CellId& cell);
nlohmann::json to_json(const SimInstant& instant);
nlohmann::json to_json(const NetworkEvent& event);

// Throw std::invalid_argument naming the offending field.
CellId cell_from_json(const nlohmann::json& j);
SimInstant instant_from_json(const nlohmann::json& j);
NetworkEvent event_from_json(const nlohmann::json& j);

std::string to_canonical_string(const NetworkEvent& event);

}  // namespace nwtb
