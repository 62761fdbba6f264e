#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nwtb/domain/event.hpp"
#include "nwtb/nf/exposure.hpp"
#include "nwtb/sba/registry.hpp"
#include "nwtb/sba/transport.hpp"

namespace nwtb::nf {

enum class SessionState { kActive, kReleased };

struct PduSession {
  std::string session_id;
  Supi supi;
  std::string dnn;
  SessionState state = SessionState::kActive;
  CellId anchor_cell;
  std::uint64_t cumulative_bytes_up = 0;
  std::uint64_t cumulative_bytes_down = 0;
  int five_qi = 9;
};

// Session management. Learns UE registration from the AMF over the
// transport (PUT /nsmf-internal/v1/ue-contexts/{supi}) and receives UP path
// switches on handover (POST .../{supi}/path-switch).
class Smf {
 public:
  Smf(sba::Transport& transport, std::string instance_id = "smf-1", sba::RetryPolicy policy = {});
  ~Smf();

  Smf(const Smf&) = delete;
  Smf& operator=(const Smf&) = delete;

  std::string bind();
  sba::NfProfile profile() const;

  // All throw ProcedureError and emit nothing when the precondition fails.
  std::pair<std::string, NetworkEvent> establish(const Supi& supi, const std::string& dnn,
                                                 const CellId& anchor_cell, SimInstant now);
  NetworkEvent release(const std::string& session_id, SimInstant now);
  NetworkEvent traffic_tick(const std::string& session_id, std::uint64_t bytes_up,
                            std::uint64_t bytes_down, SimInstant now);
  NetworkEvent qos_change(const std::string& session_id, int five_qi, SimInstant now);

  // Driven by the AMF. Deregistration releases every ACTIVE session.
  std::vector<NetworkEvent> ue_registration_changed(const Supi& supi, bool registered,
                                                    SimInstant now);
  std::vector<NetworkEvent> path_switch(const Supi& supi, const CellId& old_cell,
                                        const CellId& new_cell, SimInstant now);

  bool is_registered(const Supi& supi) const;
  std::optional<PduSession> session(const std::string& session_id) const;
  std::vector<std::string> active_sessions(const Supi& supi) const;
  std::vector<std::string> active_sessions() const;

  sba::Response handle(const sba::Request& request);

  EventExposure& exposure() { return exposure_; }
  const EventExposure& exposure() const { return exposure_; }
  const std::string& base_uri() const { return base_uri_; }

 private:
  NetworkEvent emit(EventKind kind, const Supi& supi, SimInstant now, EventPayload payload);
  NetworkEvent release_locked(PduSession& s, SimInstant now);
  PduSession& active_session(const std::string& session_id);

  sba::Transport& transport_;
  std::string instance_id_;
  std::string base_uri_;
  mutable std::mutex mutex_;
  EventExposure exposure_;
  std::set<Supi> registered_;
  std::map<std::string, PduSession> sessions_;
  std::uint64_t session_counter_ = 0;
};

}  // namespace nwtb::nf
