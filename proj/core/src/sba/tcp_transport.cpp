#include "nwtb/sba/tcp_transport.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>

#include "nwtb/domain/errors.hpp"
#include "nwtb/sba/inproc_transport.hpp"

namespace nwtb::sba {

struct TcpTransport::Server {
  httplib::Server http;
  std::thread thread;
  std::mutex serial;
  Handler handler;

  ~Server() {
    http.stop();
    if (thread.joinable()) thread.join();
  }
};

struct TcpTransport::Client {
  explicit Client(const std::string& base_uri) : http(base_uri) {
    http.set_keep_alive(true);
    http.set_tcp_nodelay(true);
    http.set_connection_timeout(std::chrono::seconds(2));
    http.set_read_timeout(std::chrono::seconds(30));
  }
  httplib::Client http;
  std::mutex in_flight;
};

TcpTransport::TcpTransport() = default;

TcpTransport::~TcpTransport() {
  std::lock_guard lock(mutex_);
  clients_.clear();
  servers_.clear();
}

std::string TcpTransport::bind(std::string_view /*name*/, Handler handler) {
  auto server = std::make_unique<Server>();
  server->handler = std::move(handler);
  server->http.set_tcp_nodelay(true);
  auto* raw = server.get();
  auto route = [raw](Method method) {
    return [raw, method](const httplib::Request& hreq, httplib::Response& hres) {
      Request req{method, hreq.target, hreq.body};
      Response resp;
      {
        std::lock_guard serial(raw->serial);
        resp = invoke_guarded(raw->handler, req);
      }
      hres.status = resp.status;
      if (!resp.body.empty()) hres.set_content(resp.body, "application/json");
    };
  };
  server->http.Get(".*", route(Method::kGet));
  server->http.Post(".*", route(Method::kPost));
  server->http.Put(".*", route(Method::kPut));
  server->http.Delete(".*", route(Method::kDelete));

  const int port = server->http.bind_to_any_port("127.0.0.1");
  if (port <= 0) throw TransportError("could not bind a loopback port");
  server->thread = std::thread([raw] { raw->http.listen_after_bind(); });
  server->http.wait_until_ready();

  std::string uri = "http://127.0.0.1:" + std::to_string(port);
  std::lock_guard lock(mutex_);
  servers_[uri] = std::move(server);
  return uri;
}

void TcpTransport::unbind(const std::string& base_uri) {
  std::unique_ptr<Server> doomed;
  {
    std::lock_guard lock(mutex_);
    auto it = servers_.find(base_uri);
    if (it == servers_.end()) return;
    doomed = std::move(it->second);
    servers_.erase(it);
    clients_.erase(base_uri);
  }
}

Response TcpTransport::send(const Request& request, const std::string& base_uri) {
  const auto started = std::chrono::steady_clock::now();
  std::shared_ptr<Client> client;
  {
    std::lock_guard lock(mutex_);
    auto& slot = clients_[base_uri];
    if (!slot) slot = std::make_shared<Client>(base_uri);
    client = slot;
  }

  httplib::Result result;
  {
    std::lock_guard one_in_flight(client->in_flight);
    auto& http = client->http;
    switch (request.method) {
      case Method::kGet: result = http.Get(request.path); break;
      case Method::kPost: result = http.Post(request.path, request.body, "application/json"); break;
      case Method::kPut: result = http.Put(request.path, request.body, "application/json"); break;
      case Method::kDelete: result = http.Delete(request.path, request.body, "application/json"); break;
    }
  }
  if (!result) {
    record(0.0, true);
    throw TransportError("cannot reach " + base_uri + ": " + httplib::to_string(result.error()));
  }
  record(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(), false);
  return Response{result->status, result->body};
}

Response Transport::send_to_uri(Method method, std::string_view uri, std::string body) {
  const auto split = split_uri(uri);
  if (!split) throw TransportError("invalid URI '" + std::string(uri) + "'");
  return send(Request{method, split->path.empty() ? "/" : split->path, std::move(body)}, split->base);
}

TransportStats Transport::stats() const {
  return {requests_.load(), errors_.load(), static_cast<double>(wall_ns_.load()) * 1e-9};
}

void Transport::record(double wall_seconds, bool transport_error) {
  requests_.fetch_add(1, std::memory_order_relaxed);
  if (transport_error) errors_.fetch_add(1, std::memory_order_relaxed);
  wall_ns_.fetch_add(static_cast<std::uint64_t>(wall_seconds * 1e9), std::memory_order_relaxed);
}

std::unique_ptr<Transport> make_transport(TransportKind kind) {
  if (kind == TransportKind::kTcp) return std::make_unique<TcpTransport>();
  return std::make_unique<InProcTransport>();
}

std::string_view to_string(TransportKind kind) {
  return kind == TransportKind::kTcp ? "tcp" : "inproc";
}

}  // namespace nwtb::sba
