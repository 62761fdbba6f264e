#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nwtb/domain/ids.hpp"
#include "nwtb/domain/time.hpp"

namespace nwtb {

enum class NfType { kAmf, kSmf, kNwdaf };

std::string_view to_string(NfType type);
std::optional<NfType> parse_nf_type(std::string_view name);

// AMF kinds first, then SMF kinds. The wire name is the enumerator name in
// upper snake case (REGISTRATION_STATE, ...).
enum class EventKind {
  kRegistrationState,
  kLocationReport,
  kPresenceInAoi,
  kConnectivityState,
  kReachability,
  kHandover,
  kPduSessionEstablishment,
  kPduSessionRelease,
  kTrafficVolumeReport,
  kQosChange,
  kUpPathChange,
};

inline constexpr EventKind kAmfEventKinds[] = {
    EventKind::kRegistrationState, EventKind::kLocationReport, EventKind::kPresenceInAoi,
    EventKind::kConnectivityState, EventKind::kReachability,   EventKind::kHandover};
inline constexpr EventKind kSmfEventKinds[] = {
    EventKind::kPduSessionEstablishment, EventKind::kPduSessionRelease,
    EventKind::kTrafficVolumeReport, EventKind::kQosChange, EventKind::kUpPathChange};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);
// The network function that owns (emits) events of this kind.
NfType owner_of(EventKind kind);
std::span<const EventKind> event_kinds_of(NfType nf);

enum class RmState { kRegistered, kDeregistered };
enum class CmState { kConnected, kIdle };

std::string_view to_string(RmState state);
std::string_view to_string(CmState state);

struct RegistrationStatePayload {
  RmState state = RmState::kDeregistered;
  friend bool operator==(const RegistrationStatePayload&, const RegistrationStatePayload&) = default;
};

struct ConnectivityStatePayload {
  CmState state = CmState::kIdle;
  friend bool operator==(const ConnectivityStatePayload&, const ConnectivityStatePayload&) = default;
};

struct LocationReportPayload {
  CellId cell;
  friend bool operator==(const LocationReportPayload&, const LocationReportPayload&) = default;
};

struct HandoverPayload {
  CellId source;
  CellId target;
  friend bool operator==(const HandoverPayload&, const HandoverPayload&) = default;
};

struct PresenceInAoiPayload {
  std::string aoi_id;
  bool inside = false;
  friend bool operator==(const PresenceInAoiPayload&, const PresenceInAoiPayload&) = default;
};

struct ReachabilityPayload {
  bool reachable = false;
  friend bool operator==(const ReachabilityPayload&, const ReachabilityPayload&) = default;
};

// Establishment and release. Volumes are the session's cumulative counters
// (zero at establishment, final totals at release).
struct PduSessionPayload {
  std::string session_id;
  std::string dnn;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  friend bool operator==(const PduSessionPayload&, const PduSessionPayload&) = default;
};

// Volumes are the delta since the previous report.
struct TrafficVolumePayload {
  std::string session_id;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  friend bool operator==(const TrafficVolumePayload&, const TrafficVolumePayload&) = default;
};

struct QosChangePayload {
  std::string session_id;
  int five_qi_before = 9;
  int five_qi_after = 9;
  friend bool operator==(const QosChangePayload&, const QosChangePayload&) = default;
};

struct UpPathChangePayload {
  std::string session_id;
  CellId old_cell;
  CellId new_cell;
  friend bool operator==(const UpPathChangePayload&, const UpPathChangePayload&) = default;
};

using EventPayload =
    std::variant<RegistrationStatePayload, ConnectivityStatePayload, LocationReportPayload,
                 HandoverPayload, PresenceInAoiPayload, ReachabilityPayload, PduSessionPayload,
                 TrafficVolumePayload, QosChangePayload, UpPathChangePayload>;

struct NetworkEvent {
  EventKind kind = EventKind::kRegistrationState;
  SimInstant timestamp;
  Supi supi;
  EventPayload payload;

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&payload);
  }

  friend bool operator==(const NetworkEvent&, const NetworkEvent&) = default;
};

// True when the payload alternative is the one `kind` requires.
bool payload_matches(EventKind kind, const EventPayload& payload);

// Every invariant violation of `e`; empty means valid.
std::vector<std::string> validate_event(const NetworkEvent& e);

}  // namespace nwtb
