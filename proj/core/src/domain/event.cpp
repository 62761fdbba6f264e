#include "nwtb/domain/event.hpp"

#include <array>
#include <utility>

namespace nwtb {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 11> kKindNames = {{
    {EventKind::kRegistrationState, "REGISTRATION_STATE"},
    {EventKind::kLocationReport, "LOCATION_REPORT"},
    {EventKind::kPresenceInAoi, "PRESENCE_IN_AOI"},
    {EventKind::kConnectivityState, "CONNECTIVITY_STATE"},
    {EventKind::kReachability, "REACHABILITY"},
    {EventKind::kHandover, "HANDOVER"},
    {EventKind::kPduSessionEstablishment, "PDU_SESSION_ESTABLISHMENT"},
    {EventKind::kPduSessionRelease, "PDU_SESSION_RELEASE"},
    {EventKind::kTrafficVolumeReport, "TRAFFIC_VOLUME_REPORT"},
    {EventKind::kQosChange, "QOS_CHANGE"},
    {EventKind::kUpPathChange, "UP_PATH_CHANGE"},
}};

}  // namespace

std::string_view to_string(NfType type) {
  switch (type) {
    case NfType::kAmf: return "AMF";
    case NfType::kSmf: return "SMF";
    case NfType::kNwdaf: return "NWDAF";
  }
  return "AMF";
}

std::optional<NfType> parse_nf_type(std::string_view name) {
  for (auto t : {NfType::kAmf, NfType::kSmf, NfType::kNwdaf}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "UNKNOWN";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

NfType owner_of(EventKind kind) {
  return static_cast<int>(kind) <= static_cast<int>(EventKind::kHandover) ? NfType::kAmf
                                                                         : NfType::kSmf;
}

std::span<const EventKind> event_kinds_of(NfType nf) {
  switch (nf) {
    case NfType::kAmf: return kAmfEventKinds;
    case NfType::kSmf: return kSmfEventKinds;
    case NfType::kNwdaf: break;
  }
  return {};
}

std::string_view to_string(RmState state) {
  return state == RmState::kRegistered ? "REGISTERED" : "DEREGISTERED";
}

std::string_view to_string(CmState state) {
  return state == CmState::kConnected ? "CONNECTED" : "IDLE";
}

bool payload_matches(EventKind kind, const EventPayload& payload) {
  switch (kind) {
    case EventKind::kRegistrationState:
      return std::holds_alternative<RegistrationStatePayload>(payload);
    case EventKind::kLocationReport: return std::holds_alternative<LocationReportPayload>(payload);
    case EventKind::kPresenceInAoi: return std::holds_alternative<PresenceInAoiPayload>(payload);
    case EventKind::kConnectivityState:
      return std::holds_alternative<ConnectivityStatePayload>(payload);
    case EventKind::kReachability: return std::holds_alternative<ReachabilityPayload>(payload);
    case EventKind::kHandover: return std::holds_alternative<HandoverPayload>(payload);
    case EventKind::kPduSessionEstablishment:
    case EventKind::kPduSessionRelease: return std::holds_alternative<PduSessionPayload>(payload);
    case EventKind::kTrafficVolumeReport:
      return std::holds_alternative<TrafficVolumePayload>(payload);
    case EventKind::kQosChange: return std::holds_alternative<QosChangePayload>(payload);
    case EventKind::kUpPathChange: return std::holds_alternative<UpPathChangePayload>(payload);
  }
  return false;
}

std::vector<std::string> validate_event(const NetworkEvent& e) {
  std::vector<std::string> violations;
  if (e.supi.empty()) violations.emplace_back("empty supi");
  if (!payload_matches(e.kind, e.payload)) {
    violations.emplace_back("payload/kind mismatch");
    return violations;
  }
  if (const auto* h = e.as<HandoverPayload>(); h && h->source == h->target) {
    violations.emplace_back("source equals target");
  }
  if (const auto* u = e.as<UpPathChangePayload>(); u && u->old_cell == u->new_cell) {
    violations.emplace_back("old cell equals new cell");
  }
  if (e.timestamp.offset_s < 0.0) violations.emplace_back("negative timestamp");
  return violations;
}

}  // namespace nwtb
