#include "nwtb/domain/event_json.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace nwtb {
namespace {

using nlohmann::json;

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw std::invalid_argument(std::string("expected object holding '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) throw std::invalid_argument(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

bool bool_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_boolean()) throw std::invalid_argument(std::string("field '") + name + "' must be a boolean");
  return v.get<bool>();
}

std::uint64_t u64_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_unsigned()) {
    throw std::invalid_argument(std::string("field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

int int_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

json payload_to_json(const EventPayload& payload) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RegistrationStatePayload>) {
          return {{"state", to_string(p.state)}};
        } else if constexpr (std::is_same_v<T, ConnectivityStatePayload>) {
          return {{"state", to_string(p.state)}};
        } else if constexpr (std::is_same_v<T, LocationReportPayload>) {
          return {{"cell", to_json(p.cell)}};
        } else if constexpr (std::is_same_v<T, HandoverPayload>) {
          return {{"source", to_json(p.source)}, {"target", to_json(p.target)}};
        } else if constexpr (std::is_same_v<T, PresenceInAoiPayload>) {
          return {{"aoi_id", p.aoi_id}, {"inside", p.inside}};
        } else if constexpr (std::is_same_v<T, ReachabilityPayload>) {
          return {{"reachable", p.reachable}};
        } else if constexpr (std::is_same_v<T, PduSessionPayload>) {
          return {{"session_id", p.session_id},
                  {"dnn", p.dnn},
                  {"bytes_up", p.bytes_up},
                  {"bytes_down", p.bytes_down}};
        } else if constexpr (std::is_same_v<T, TrafficVolumePayload>) {
          return {{"session_id", p.session_id}, {"bytes_up", p.bytes_up}, {"bytes_down", p.bytes_down}};
        } else if constexpr (std::is_same_v<T, QosChangePayload>) {
          return {{"session_id", p.session_id},
                  {"five_qi_before", p.five_qi_before},
                  {"five_qi_after", p.five_qi_after}};
        } else {
          return {{"session_id", p.session_id},
                  {"old_cell", to_json(p.old_cell)},
                  {"new_cell", to_json(p.new_cell)}};
        }
      },
      payload);
}

EventPayload payload_from_json(EventKind kind, const json& j) {
  switch (kind) {
    case EventKind::kRegistrationState: {
      const auto s = string_field(j, "state");
      if (s == "REGISTERED") return RegistrationStatePayload{RmState::kRegistered};
      if (s == "DEREGISTERED") return RegistrationStatePayload{RmState::kDeregistered};
      throw std::invalid_argument("unknown registration state '" + s + "'");
    }
    case EventKind::kConnectivityState: {
      const auto s = string_field(j, "state");
      if (s == "CONNECTED") return ConnectivityStatePayload{CmState::kConnected};
      if (s == "IDLE") return ConnectivityStatePayload{CmState::kIdle};
      throw std::invalid_argument("unknown connectivity state '" + s + "'");
    }
    case EventKind::kLocationReport: return LocationReportPayload{cell_from_json(field(j, "cell"))};
    case EventKind::kHandover:
      return HandoverPayload{cell_from_json(field(j, "source")), cell_from_json(field(j, "target"))};
    case EventKind::kPresenceInAoi:
      return PresenceInAoiPayload{string_field(j, "aoi_id"), bool_field(j, "inside")};
    case EventKind::kReachability: return ReachabilityPayload{bool_field(j, "reachable")};
    case EventKind::kPduSessionEstablishment:
    case EventKind::kPduSessionRelease:
      return PduSessionPayload{string_field(j, "session_id"), string_field(j, "dnn"),
                               u64_field(j, "bytes_up"), u64_field(j, "bytes_down")};
    case EventKind::kTrafficVolumeReport:
      return TrafficVolumePayload{string_field(j, "session_id"), u64_field(j, "bytes_up"),
                                  u64_field(j, "bytes_down")};
    case EventKind::kQosChange:
      return QosChangePayload{string_field(j, "session_id"), int_field(j, "five_qi_before"),
                              int_field(j, "five_qi_after")};
    case EventKind::kUpPathChange:
      return UpPathChangePayload{string_field(j, "session_id"), cell_from_json(field(j, "old_cell")),
                                 cell_from_json(field(j, "new_cell"))};
  }
  throw std::invalid_argument("unhandled event kind");
}

}  // namespace

json to_json(const CellId& cell) { return {{"id", cell.id}, {"tac", cell.tac}}; }

json to_json(const SimInstant& instant) {
  return {{"utc", instant.utc()}, {"offset_s", instant.offset_s}};
}

json to_json(const NetworkEvent& event) {
  return {{"kind", to_string(event.kind)},
          {"timestamp", to_json(event.timestamp)},
          {"supi", event.supi.value},
          {"payload", payload_to_json(event.payload)}};
}

CellId cell_from_json(const json& j) {
  const auto& tac = field(j, "tac");
  if (!tac.is_number_integer()) throw std::invalid_argument("field 'tac' must be an integer");
  return {string_field(j, "id"), tac.get<std::int64_t>()};
}

SimInstant instant_from_json(const json& j) {
  const auto& off = field(j, "offset_s");
  if (!off.is_number()) throw std::invalid_argument("field 'offset_s' must be a number");
  const double offset_s = off.get<double>();
  if (!std::isfinite(offset_s) || offset_s < 0.0) throw std::invalid_argument("invalid 'offset_s'");
  const auto utc = string_field(j, "utc");
  const auto wall_ms = parse_utc_ms(utc);
  if (!wall_ms) throw std::invalid_argument("malformed 'utc' timestamp '" + utc + "'");
  const auto offset_ms = static_cast<std::int64_t>(std::llround(offset_s * 1000.0));
  const std::int64_t start_ms = *wall_ms - offset_ms;
  if (start_ms % 1000 != 0) throw std::invalid_argument("'utc' and 'offset_s' disagree");
  return {start_ms / 1000, offset_s};
}

NetworkEvent event_from_json(const json& j) {
  const auto kind_name = string_field(j, "kind");
  const auto kind = parse_event_kind(kind_name);
  if (!kind) throw std::invalid_argument("unknown event kind '" + kind_name + "'");
  NetworkEvent e;
  e.kind = *kind;
  e.timestamp = instant_from_json(field(j, "timestamp"));
  e.supi = Supi{string_field(j, "supi")};
  e.payload = payload_from_json(*kind, field(j, "payload"));
  return e;
}

std::string to_canonical_string(const NetworkEvent& event) { return to_json(event).dump(); }

}  // namespace nwtb
