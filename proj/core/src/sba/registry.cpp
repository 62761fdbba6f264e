#include "nwtb/sba/registry.hpp"

#include <algorithm>
#include <mutex>

#include "nwtb/domain/errors.hpp"
#include "nwtb/sba/transport.hpp"

namespace nwtb::sba {
namespace {

constexpr std::string_view kNfmPrefix = "/nnrf-nfm/v1/nf-instances/";
constexpr std::string_view kDiscPath = "/nnrf-disc/v1/nf-instances";

void validate(const NfProfile& p) {
  if (p.nf_instance_id.empty()) throw ApiError(400, "nfInstanceId must be non-empty");
  for (const auto& s : p.services) {
    if (s.service_name.empty()) throw ApiError(400, "serviceName must be non-empty");
    if (!split_uri(s.base_uri)) throw ApiError(400, "invalid baseUri '" + s.base_uri + "'");
  }
}

}  // namespace

nlohmann::json to_json(const NfProfile& profile) {
  auto services = nlohmann::json::array();
  for (const auto& s : profile.services) {
    services.push_back({{"serviceName", s.service_name}, {"baseUri", s.base_uri}});
  }
  return {{"nfInstanceId", profile.nf_instance_id},
          {"nfType", to_string(profile.nf_type)},
          {"services", services}};
}

NfProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ApiError(400, "profile must be an object");
  NfProfile p;
  try {
    p.nf_instance_id = j.at("nfInstanceId").get<std::string>();
    const auto type = parse_nf_type(j.at("nfType").get<std::string>());
    if (!type) throw ApiError(400, "unknown nfType");
    p.nf_type = *type;
    for (const auto& s : j.value("services", nlohmann::json::array())) {
      p.services.push_back({s.at("serviceName").get<std::string>(), s.at("baseUri").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ApiError(400, std::string("malformed profile: ") + e.what());
  }
  return p;
}

bool NrfRegistry::register_nf(const NfProfile& profile) {
  validate(profile);
  std::unique_lock lock(mutex_);
  auto it = std::find_if(profiles_.begin(), profiles_.end(), [&](const NfProfile& p) {
    return p.nf_instance_id == profile.nf_instance_id;
  });
  if (it != profiles_.end()) {
    *it = profile;
    return false;
  }
  profiles_.push_back(profile);
  return true;
}

std::vector<std::string> NrfRegistry::discover(NfType target, std::string_view service_name) const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> uris;
  for (const auto& p : profiles_) {
    if (p.nf_type != target) continue;
    for (const auto& s : p.services) {
      if (s.service_name == service_name) uris.push_back(s.base_uri);
    }
  }
  return uris;
}

std::size_t NrfRegistry::size() const {
  std::shared_lock lock(mutex_);
  return profiles_.size();
}

Response NrfRegistry::handle(const Request& request) {
  const auto path = request.path_only();
  if (request.method == Method::kPut && path.starts_with(kNfmPrefix)) {
    const auto id = url_decode(std::string_view(path).substr(kNfmPrefix.size()));
    auto profile = profile_from_json(request.json());
    if (profile.nf_instance_id != id) throw ApiError(400, "nfInstanceId does not match path");
    const bool created = register_nf(profile);
    return Response::with_json(created ? 201 : 200, to_json(profile));
  }
  if (request.method == Method::kGet && path == kDiscPath) {
    const auto q = request.query();
    const auto type_it = q.find("target-nf-type");
    const auto svc_it = q.find("service-name");
    if (type_it == q.end() || svc_it == q.end()) {
      throw ApiError(400, "target-nf-type and service-name are required");
    }
    const auto type = parse_nf_type(type_it->second);
    if (!type) throw ApiError(400, "unknown target-nf-type");
    std::shared_lock lock(mutex_);
    auto instances = nlohmann::json::array();
    for (const auto& p : profiles_) {
      if (p.nf_type != *type) continue;
      for (const auto& s : p.services) {
        if (s.service_name != svc_it->second) continue;
        instances.push_back({{"nfInstanceId", p.nf_instance_id},
                             {"nfType", to_string(p.nf_type)},
                             {"serviceName", s.service_name},
                             {"baseUri", s.base_uri}});
      }
    }
    return Response::with_json(200, {{"instances", instances}});
  }
  return Response::error(404, "no such resource");
}

Handler NrfRegistry::handler() {
  return [this](const Request& r) { return handle(r); };
}

void NrfClient::register_nf(const NfProfile& profile) {
  auto req = Request::with_json(
      Method::kPut, std::string(kNfmPrefix) + url_encode(profile.nf_instance_id), to_json(profile));
  const auto resp = transport_.send(req, nrf_uri_);
  if (!resp.ok()) throw ApiError(resp.status, "NF registration rejected: " + resp.body);
}

std::vector<std::string> NrfClient::discover(NfType target, std::string_view service_name) {
  Request req{Method::kGet,
              std::string(kDiscPath) + "?target-nf-type=" + std::string(to_string(target)) +
                  "&service-name=" + url_encode(service_name),
              {}};
  const auto resp = transport_.send(req, nrf_uri_);
  if (!resp.ok()) throw ApiError(resp.status, "discovery failed: " + resp.body);
  const auto body = resp.json();
  std::vector<std::string> uris;
  for (const auto& inst : body.at("instances")) uris.push_back(inst.at("baseUri").get<std::string>());
  return uris;
}

}  // namespace nwtb::sba
