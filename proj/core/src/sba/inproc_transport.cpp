#include "nwtb/sba/inproc_transport.hpp"

#include <chrono>

#include "nwtb/domain/errors.hpp"

namespace nwtb::sba {

std::string InProcTransport::bind(std::string_view name, Handler handler) {
  std::string uri = "inproc://" + std::string(name);
  auto endpoint = std::make_shared<Endpoint>();
  endpoint->handler = std::move(handler);
  std::unique_lock lock(mutex_);
  endpoints_[uri] = std::move(endpoint);
  return uri;
}

void InProcTransport::unbind(const std::string& base_uri) {
  std::unique_lock lock(mutex_);
  endpoints_.erase(base_uri);
}

Response InProcTransport::send(const Request& request, const std::string& base_uri) {
  const auto started = std::chrono::steady_clock::now();
  std::shared_ptr<Endpoint> endpoint;
  {
    std::shared_lock lock(mutex_);
    if (auto it = endpoints_.find(base_uri); it != endpoints_.end()) endpoint = it->second;
  }
  if (!endpoint) {
    record(0.0, true);
    throw TransportError("no endpoint bound at " + base_uri);
  }
  Response response;
  {
    std::lock_guard serial(endpoint->serial);
    response = invoke_guarded(endpoint->handler, request);
  }
  record(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(), false);
  return response;
}

}  // namespace nwtb::sba
