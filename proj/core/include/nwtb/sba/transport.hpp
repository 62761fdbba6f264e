#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "nwtb/sba/message.hpp"

namespace nwtb::sba {

struct TransportStats {
  std::uint64_t requests = 0;
  std::uint64_t transport_errors = 0;
  // Wall-clock time spent inside send(), summed over all requests.
  double wall_seconds = 0.0;
};

// Request/response delivery between service endpoints.
class Transport {
 public:
  virtual ~Transport() = default;

  // Exposes `handler` and returns the base URI peers use to reach it.
  // The handler is invoked serially, in arrival order.
  virtual std::string bind(std::string_view name, Handler handler) = 0;
  virtual void unbind(const std::string& base_uri) = 0;

  // Delivers `request` to the endpoint at `base_uri` and returns its
  // response. Throws TransportError if the endpoint is unreachable.
  virtual Response send(const Request& request, const std::string& base_uri) = 0;

  // Convenience for full URIs such as notification callbacks.
  Response send_to_uri(Method method, std::string_view uri, std::string body);

  TransportStats stats() const;

 protected:
  void record(double wall_seconds, bool transport_error);

 private:
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> errors_{0};
  std::atomic<std::uint64_t> wall_ns_{0};
};

enum class TransportKind { kInProc, kTcp };

std::unique_ptr<Transport> make_transport(TransportKind kind);
std::string_view to_string(TransportKind kind);

}  // namespace nwtb::sba
