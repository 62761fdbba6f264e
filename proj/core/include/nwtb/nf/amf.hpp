#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nwtb/domain/event.hpp"
#include "nwtb/nf/exposure.hpp"
#include "nwtb/sba/registry.hpp"
#include "nwtb/sba/transport.hpp"

namespace nwtb::nf {

// Axis-aligned rectangle used for PRESENCE_IN_AOI reporting.
struct AreaOfInterest {
  std::string id;
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool contains(const Position& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

struct UeContext {
  Supi supi;
  RmState rm_state = RmState::kDeregistered;
  CmState cm_state = CmState::kIdle;
  std::optional<CellId> serving_cell;
  // Most recent first; at most two entries.
  std::vector<CellId> last_two_cells;
  bool reachable = false;
  std::map<std::string, bool> inside_aoi;

  // serving_cell iff REGISTERED; DEREGISTERED implies IDLE.
  bool invariants_hold() const;
};

// Access and mobility management. Procedures route every event through the
// exposure engine and reach the SMF over the transport for session side
// effects (release on deregistration, UP path switch on handover). The
// returned list holds the AMF's events followed by any the SMF reported.
class Amf {
 public:
  Amf(sba::Transport& transport, std::string instance_id = "amf-1", sba::RetryPolicy policy = {});
  ~Amf();

  Amf(const Amf&) = delete;
  Amf& operator=(const Amf&) = delete;

  // Binds the AMF's service endpoint; returns its base URI.
  std::string bind();
  sba::NfProfile profile() const;
  void connect_smf(std::string smf_base_uri);
  void set_areas_of_interest(std::vector<AreaOfInterest> areas);

  // Each throws ProcedureError and emits nothing when its precondition fails.
  std::vector<NetworkEvent> register_ue(const Supi& supi, const CellId& cell, SimInstant now);
  std::vector<NetworkEvent> deregister_ue(const Supi& supi, SimInstant now);
  std::vector<NetworkEvent> handover(const Supi& supi, const CellId& target, SimInstant now);

  // Out-of-coverage handling: IDLE + unreachable, then back to CONNECTED +
  // reachable (followed by a handover if the UE re-entered elsewhere).
  std::vector<NetworkEvent> radio_loss(const Supi& supi, SimInstant now);
  std::vector<NetworkEvent> radio_restore(const Supi& supi, const CellId& cell, SimInstant now);

  // Emits PRESENCE_IN_AOI on area entry/exit for a registered UE.
  std::vector<NetworkEvent> update_position(const Supi& supi, const Position& pos, SimInstant now);

  std::optional<UeContext> context(const Supi& supi) const;
  std::vector<UeContext> contexts() const;

  sba::Response handle(const sba::Request& request);

  // Exposure engine access; callers must not race with procedures.
  EventExposure& exposure() { return exposure_; }
  const EventExposure& exposure() const { return exposure_; }
  const std::string& base_uri() const { return base_uri_; }
  const std::string& instance_id() const { return instance_id_; }

 private:
  NetworkEvent emit(std::vector<NetworkEvent>& out, EventKind kind, const Supi& supi,
                    SimInstant now, EventPayload payload);
  void notify_smf_registration(const Supi& supi, bool registered, SimInstant now,
                               std::vector<NetworkEvent>& out);
  void handover_locked(UeContext& ue, const CellId& target, SimInstant now,
                       std::vector<NetworkEvent>& out);

  sba::Transport& transport_;
  std::string instance_id_;
  std::string base_uri_;
  std::string smf_uri_;
  mutable std::mutex mutex_;
  EventExposure exposure_;
  std::map<Supi, UeContext> ues_;
  std::vector<AreaOfInterest> areas_;
};

}  // namespace nwtb::nf
