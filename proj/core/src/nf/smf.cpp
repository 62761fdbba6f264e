#include "nwtb/nf/smf.hpp"

#include <cstdio>

#include "nwtb/domain/errors.hpp"
#include "nwtb/domain/event_json.hpp"

namespace nwtb::nf {
namespace {

constexpr std::string_view kUeContexts = "/nsmf-internal/v1/ue-contexts/";

}  // namespace

Smf::Smf(sba::Transport& transport, std::string instance_id, sba::RetryPolicy policy)
    : transport_(transport),
      instance_id_(std::move(instance_id)),
      exposure_(NfType::kSmf, transport, policy) {}

Smf::~Smf() {
  if (!base_uri_.empty()) transport_.unbind(base_uri_);
}

std::string Smf::bind() {
  base_uri_ = transport_.bind(instance_id_, [this](const sba::Request& r) { return handle(r); });
  return base_uri_;
}

sba::NfProfile Smf::profile() const {
  return {instance_id_, NfType::kSmf, {{exposure_.service_name(), base_uri_}}};
}

NetworkEvent Smf::emit(EventKind kind, const Supi& supi, SimInstant now, EventPayload payload) {
  NetworkEvent e{kind, now, supi, std::move(payload)};
  exposure_.send_event_notification(e);
  return e;
}

PduSession& Smf::active_session(const std::string& session_id) {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw ProcedureError("unknown session " + session_id);
  if (it->second.state != SessionState::kActive) {
    throw ProcedureError("session " + session_id + " is released");
  }
  return it->second;
}

std::pair<std::string, NetworkEvent> Smf::establish(const Supi& supi, const std::string& dnn,
                                                    const CellId& anchor_cell, SimInstant now) {
  std::lock_guard lock(mutex_);
  if (!registered_.contains(supi)) throw ProcedureError(supi.value + " is not registered");
  char id[32];
  std::snprintf(id, sizeof(id), "PDU-%06llu", static_cast<unsigned long long>(++session_counter_));
  PduSession s;
  s.session_id = id;
  s.supi = supi;
  s.dnn = dnn;
  s.anchor_cell = anchor_cell;
  sessions_.emplace(s.session_id, s);
  auto e = emit(EventKind::kPduSessionEstablishment, supi, now, PduSessionPayload{id, dnn, 0, 0});
  return {id, std::move(e)};
}

NetworkEvent Smf::release_locked(PduSession& s, SimInstant now) {
  s.state = SessionState::kReleased;
  return emit(EventKind::kPduSessionRelease, s.supi, now,
              PduSessionPayload{s.session_id, s.dnn, s.cumulative_bytes_up, s.cumulative_bytes_down});
}

NetworkEvent Smf::release(const std::string& session_id, SimInstant now) {
  std::lock_guard lock(mutex_);
  return release_locked(active_session(session_id), now);
}

NetworkEvent Smf::traffic_tick(const std::string& session_id, std::uint64_t bytes_up,
                               std::uint64_t bytes_down, SimInstant now) {
  std::lock_guard lock(mutex_);
  auto& s = active_session(session_id);
  s.cumulative_bytes_up += bytes_up;
  s.cumulative_bytes_down += bytes_down;
  return emit(EventKind::kTrafficVolumeReport, s.supi, now,
              TrafficVolumePayload{s.session_id, bytes_up, bytes_down});
}

NetworkEvent Smf::qos_change(const std::string& session_id, int five_qi, SimInstant now) {
  std::lock_guard lock(mutex_);
  auto& s = active_session(session_id);
  const int before = s.five_qi;
  s.five_qi = five_qi;
  return emit(EventKind::kQosChange, s.supi, now, QosChangePayload{s.session_id, before, five_qi});
}

std::vector<NetworkEvent> Smf::ue_registration_changed(const Supi& supi, bool registered,
                                                       SimInstant now) {
  std::lock_guard lock(mutex_);
  std::vector<NetworkEvent> out;
  if (registered) {
    registered_.insert(supi);
    return out;
  }
  registered_.erase(supi);
  for (auto& [id, s] : sessions_) {
    if (s.supi == supi && s.state == SessionState::kActive) out.push_back(release_locked(s, now));
  }
  return out;
}

std::vector<NetworkEvent> Smf::path_switch(const Supi& supi, const CellId& old_cell,
                                           const CellId& new_cell, SimInstant now) {
  std::lock_guard lock(mutex_);
  std::vector<NetworkEvent> out;
  for (auto& [id, s] : sessions_) {
    if (s.supi != supi || s.state != SessionState::kActive) continue;
    s.anchor_cell = new_cell;
    out.push_back(emit(EventKind::kUpPathChange, supi, now,
                       UpPathChangePayload{s.session_id, old_cell, new_cell}));
  }
  return out;
}

bool Smf::is_registered(const Supi& supi) const {
  std::lock_guard lock(mutex_);
  return registered_.contains(supi);
}

std::optional<PduSession> Smf::session(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Smf::active_sessions(const Supi& supi) const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) {
    if (s.supi == supi && s.state == SessionState::kActive) ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> Smf::active_sessions() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) {
    if (s.state == SessionState::kActive) ids.push_back(id);
  }
  return ids;
}

sba::Response Smf::handle(const sba::Request& request) {
  {
    std::lock_guard lock(mutex_);
    if (auto resp = exposure_.handle(request)) return *resp;
  }
  const auto path = request.path_only();
  if (!path.starts_with(kUeContexts)) return sba::Response::error(404, "no such resource");
  auto rest = std::string_view(path).substr(kUeContexts.size());
  const bool is_switch = rest.ends_with("/path-switch");
  if (is_switch) rest.remove_suffix(std::string_view("/path-switch").size());
  const Supi supi{sba::url_decode(rest)};
  if (supi.empty()) throw ApiError(400, "missing SUPI");

  const auto body = request.json();
  const auto now = instant_from_json(body.at("timestamp"));
  nlohmann::json events = nlohmann::json::array();
  if (request.method == sba::Method::kPut && !is_switch) {
    for (const auto& e : ue_registration_changed(supi, body.at("registered").get<bool>(), now)) {
      events.push_back(to_json(e));
    }
  } else if (request.method == sba::Method::kPost && is_switch) {
    for (const auto& e : path_switch(supi, cell_from_json(body.at("oldCell")),
                                     cell_from_json(body.at("newCell")), now)) {
      events.push_back(to_json(e));
    }
  } else {
    return sba::Response::error(404, "no such resource");
  }
  return sba::Response::with_json(200, {{"events", events}});
}

}  // namespace nwtb::nf
