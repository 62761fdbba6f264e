#include "nwtb/nf/amf.hpp"

#include <spdlog/spdlog.h>

#include "nwtb/domain/errors.hpp"
#include "nwtb/domain/event_json.hpp"

namespace nwtb::nf {

bool UeContext::invariants_hold() const {
  if (serving_cell.has_value() != (rm_state == RmState::kRegistered)) return false;
  if (rm_state == RmState::kDeregistered && cm_state != CmState::kIdle) return false;
  return last_two_cells.size() <= 2;
}

Amf::Amf(sba::Transport& transport, std::string instance_id, sba::RetryPolicy policy)
    : transport_(transport),
      instance_id_(std::move(instance_id)),
      exposure_(NfType::kAmf, transport, policy) {}

Amf::~Amf() {
  if (!base_uri_.empty()) transport_.unbind(base_uri_);
}

std::string Amf::bind() {
  base_uri_ = transport_.bind(instance_id_, [this](const sba::Request& r) { return handle(r); });
  return base_uri_;
}

sba::NfProfile Amf::profile() const {
  return {instance_id_, NfType::kAmf, {{exposure_.service_name(), base_uri_}}};
}

void Amf::connect_smf(std::string smf_base_uri) {
  std::lock_guard lock(mutex_);
  smf_uri_ = std::move(smf_base_uri);
}

void Amf::set_areas_of_interest(std::vector<AreaOfInterest> areas) {
  std::lock_guard lock(mutex_);
  areas_ = std::move(areas);
}

NetworkEvent Amf::emit(std::vector<NetworkEvent>& out, EventKind kind, const Supi& supi,
                       SimInstant now, EventPayload payload) {
  NetworkEvent e{kind, now, supi, std::move(payload)};
  exposure_.send_event_notification(e);
  out.push_back(e);
  return e;
}

void Amf::notify_smf_registration(const Supi& supi, bool registered, SimInstant now,
                                  std::vector<NetworkEvent>& out) {
  if (smf_uri_.empty()) return;
  auto req = sba::Request::with_json(
      sba::Method::kPut, "/nsmf-internal/v1/ue-contexts/" + sba::url_encode(supi.value),
      {{"registered", registered}, {"timestamp", to_json(now)}});
  try {
    const auto resp = transport_.send(req, smf_uri_);
    if (!resp.ok()) {
      spdlog::warn("AMF: SMF rejected UE context update for {}: {}", supi.value, resp.body);
      return;
    }
    const auto body = resp.json();
    for (const auto& e : body.at("events")) out.push_back(event_from_json(e));
  } catch (const TransportError& e) {
    spdlog::warn("AMF: SMF unreachable: {}", e.what());
  }
}

std::vector<NetworkEvent> Amf::register_ue(const Supi& supi, const CellId& cell, SimInstant now) {
  std::lock_guard lock(mutex_);
  if (supi.empty()) throw ProcedureError("registration requires a SUPI");
  auto& ue = ues_[supi];
  ue.supi = supi;
  if (ue.rm_state == RmState::kRegistered) {
    throw ProcedureError(supi.value + " is already registered");
  }
  ue.rm_state = RmState::kRegistered;
  ue.cm_state = CmState::kConnected;
  ue.serving_cell = cell;
  ue.reachable = true;

  std::vector<NetworkEvent> out;
  emit(out, EventKind::kRegistrationState, supi, now, RegistrationStatePayload{RmState::kRegistered});
  emit(out, EventKind::kConnectivityState, supi, now, ConnectivityStatePayload{CmState::kConnected});
  emit(out, EventKind::kLocationReport, supi, now, LocationReportPayload{cell});
  notify_smf_registration(supi, true, now, out);
  return out;
}

std::vector<NetworkEvent> Amf::deregister_ue(const Supi& supi, SimInstant now) {
  std::lock_guard lock(mutex_);
  auto it = ues_.find(supi);
  if (it == ues_.end() || it->second.rm_state != RmState::kRegistered) {
    throw ProcedureError(supi.value + " is not registered");
  }
  auto& ue = it->second;
  ue.rm_state = RmState::kDeregistered;
  ue.cm_state = CmState::kIdle;
  ue.serving_cell.reset();
  ue.reachable = false;
  ue.inside_aoi.clear();

  std::vector<NetworkEvent> out;
  emit(out, EventKind::kConnectivityState, supi, now, ConnectivityStatePayload{CmState::kIdle});
  emit(out, EventKind::kRegistrationState, supi, now,
       RegistrationStatePayload{RmState::kDeregistered});
  notify_smf_registration(supi, false, now, out);
  return out;
}

void Amf::handover_locked(UeContext& ue, const CellId& target, SimInstant now,
                          std::vector<NetworkEvent>& out) {
  const CellId source = *ue.serving_cell;
  ue.serving_cell = target;
  ue.last_two_cells.insert(ue.last_two_cells.begin(), source);
  if (ue.last_two_cells.size() > 2) ue.last_two_cells.resize(2);

  emit(out, EventKind::kHandover, ue.supi, now, HandoverPayload{source, target});
  emit(out, EventKind::kLocationReport, ue.supi, now, LocationReportPayload{target});

  if (smf_uri_.empty()) return;
  auto req = sba::Request::with_json(
      sba::Method::kPost,
      "/nsmf-internal/v1/ue-contexts/" + sba::url_encode(ue.supi.value) + "/path-switch",
      {{"oldCell", to_json(source)}, {"newCell", to_json(target)}, {"timestamp", to_json(now)}});
  try {
    const auto resp = transport_.send(req, smf_uri_);
    if (!resp.ok()) {
      spdlog::warn("AMF: SMF rejected path switch for {}: {}", ue.supi.value, resp.body);
      return;
    }
    const auto body = resp.json();
    for (const auto& e : body.at("events")) out.push_back(event_from_json(e));
  } catch (const TransportError& e) {
    spdlog::warn("AMF: SMF unreachable: {}", e.what());
  }
}

std::vector<NetworkEvent> Amf::handover(const Supi& supi, const CellId& target, SimInstant now) {
  std::lock_guard lock(mutex_);
  auto it = ues_.find(supi);
  if (it == ues_.end() || it->second.rm_state != RmState::kRegistered) {
    throw ProcedureError(supi.value + " is not registered");
  }
  if (*it->second.serving_cell == target) {
    throw ProcedureError("handover target " + target.id + " is the serving cell");
  }
  std::vector<NetworkEvent> out;
  handover_locked(it->second, target, now, out);
  return out;
}

std::vector<NetworkEvent> Amf::radio_loss(const Supi& supi, SimInstant now) {
  std::lock_guard lock(mutex_);
  auto it = ues_.find(supi);
  if (it == ues_.end() || it->second.rm_state != RmState::kRegistered) {
    throw ProcedureError(supi.value + " is not registered");
  }
  auto& ue = it->second;
  if (!ue.reachable) throw ProcedureError(supi.value + " is already out of coverage");
  ue.cm_state = CmState::kIdle;
  ue.reachable = false;
  std::vector<NetworkEvent> out;
  emit(out, EventKind::kConnectivityState, supi, now, ConnectivityStatePayload{CmState::kIdle});
  emit(out, EventKind::kReachability, supi, now, ReachabilityPayload{false});
  return out;
}

std::vector<NetworkEvent> Amf::radio_restore(const Supi& supi, const CellId& cell, SimInstant now) {
  std::lock_guard lock(mutex_);
  auto it = ues_.find(supi);
  if (it == ues_.end() || it->second.rm_state != RmState::kRegistered) {
    throw ProcedureError(supi.value + " is not registered");
  }
  auto& ue = it->second;
  if (ue.reachable) throw ProcedureError(supi.value + " is not out of coverage");
  ue.cm_state = CmState::kConnected;
  ue.reachable = true;
  std::vector<NetworkEvent> out;
  emit(out, EventKind::kConnectivityState, supi, now, ConnectivityStatePayload{CmState::kConnected});
  emit(out, EventKind::kReachability, supi, now, ReachabilityPayload{true});
  if (*ue.serving_cell != cell) handover_locked(ue, cell, now, out);
  return out;
}

std::vector<NetworkEvent> Amf::update_position(const Supi& supi, const Position& pos,
                                               SimInstant now) {
  std::lock_guard lock(mutex_);
  std::vector<NetworkEvent> out;
  auto it = ues_.find(supi);
  if (it == ues_.end() || it->second.rm_state != RmState::kRegistered) return out;
  auto& ue = it->second;
  for (const auto& area : areas_) {
    const bool inside = area.contains(pos);
    auto& known = ue.inside_aoi[area.id];
    if (inside == known) continue;
    known = inside;
    emit(out, EventKind::kPresenceInAoi, supi, now, PresenceInAoiPayload{area.id, inside});
  }
  return out;
}

std::optional<UeContext> Amf::context(const Supi& supi) const {
  std::lock_guard lock(mutex_);
  auto it = ues_.find(supi);
  if (it == ues_.end()) return std::nullopt;
  return it->second;
}

std::vector<UeContext> Amf::contexts() const {
  std::lock_guard lock(mutex_);
  std::vector<UeContext> out;
  for (const auto& [_, ue] : ues_) out.push_back(ue);
  return out;
}

sba::Response Amf::handle(const sba::Request& request) {
  std::lock_guard lock(mutex_);
  if (auto resp = exposure_.handle(request)) return *resp;
  return sba::Response::error(404, "no such resource");
}

}  // namespace nwtb::nf
