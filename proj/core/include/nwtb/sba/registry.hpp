#pragma once

#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwtb/domain/event.hpp"
#include "nwtb/sba/message.hpp"

namespace nwtb::sba {

class Transport;

struct NfService {
  std::string service_name;
  std::string base_uri;
  friend bool operator==(const NfService&, const NfService&) = default;
};

struct NfProfile {
  std::string nf_instance_id;
  NfType nf_type = NfType::kAmf;
  std::vector<NfService> services;
  friend bool operator==(const NfProfile&, const NfProfile&) = default;
};

nlohmann::json to_json(const NfProfile& profile);
// Throws ApiError(400) on a malformed profile.
NfProfile profile_from_json(const nlohmann::json& j);

// NRF-style registry. Profiles keep their first-registration order;
// re-registering an id replaces the profile in place.
class NrfRegistry {
 public:
  // Returns true when the id was new. Throws ApiError(400) if invalid.
  bool register_nf(const NfProfile& profile);
  std::vector<std::string> discover(NfType target, std::string_view service_name) const;
  std::size_t size() const;

  // PUT /nnrf-nfm/v1/nf-instances/{id} and GET /nnrf-disc/v1/nf-instances.
  Response handle(const Request& request);
  Handler handler();

 private:
  mutable std::shared_mutex mutex_;
  std::vector<NfProfile> profiles_;
};

// Talks to a registry through a transport.
class NrfClient {
 public:
  NrfClient(Transport& transport, std::string nrf_uri)
      : transport_(transport), nrf_uri_(std::move(nrf_uri)) {}

  // Throws ApiError with the registry's status on rejection.
  void register_nf(const NfProfile& profile);
  std::vector<std::string> discover(NfType target, std::string_view service_name);

 private:
  Transport& transport_;
  std::string nrf_uri_;
};

}  // namespace nwtb::sba
