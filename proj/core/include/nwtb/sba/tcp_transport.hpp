#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nwtb/sba/transport.hpp"

namespace nwtb::sba {

// HTTP/1.1 over loopback TCP with JSON bodies. Each bind() starts a server
// on an ephemeral 127.0.0.1 port; send() keeps one client connection per
// destination with at most one request in flight on it.
class TcpTransport final : public Transport {
 public:
  TcpTransport();
  ~TcpTransport() override;

  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  std::string bind(std::string_view name, Handler handler) override;
  void unbind(const std::string& base_uri) override;
  Response send(const Request& request, const std::string& base_uri) override;

 private:
  struct Server;
  struct Client;

  std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Server>> servers_;
  std::map<std::string, std::shared_ptr<Client>> clients_;
};

}  // namespace nwtb::sba
