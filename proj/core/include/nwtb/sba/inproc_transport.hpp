#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>

#include "nwtb/sba/transport.hpp"

namespace nwtb::sba {

// Synchronous, deterministic binding: send() runs the destination handler
// on the caller's thread. Base URIs look like "inproc://<name>".
class InProcTransport final : public Transport {
 public:
  std::string bind(std::string_view name, Handler handler) override;
  void unbind(const std::string& base_uri) override;
  Response send(const Request& request, const std::string& base_uri) override;

 private:
  struct Endpoint {
    Handler handler;
    std::mutex serial;
  };

  std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Endpoint>, std::less<>> endpoints_;
};

}  // namespace nwtb::sba
