#include "nwtb/nwdaf/nwdaf.hpp"

#include <cctype>
#include <chrono>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "nwtb/domain/errors.hpp"
#include "nwtb/domain/event_json.hpp"

namespace nwtb::nwdaf {
namespace {

constexpr std::string_view kNotifyPrefix = "/nwdaf-notify/v1/";

std::string service_for(NfType nf) { return nf == NfType::kAmf ? "namf-evts" : "nsmf-evts"; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

Nwdaf::Nwdaf(sba::Transport& transport, const SimClock& clock, std::string nrf_uri,
             NwdafOptions options)
    : transport_(transport), clock_(clock), nrf_uri_(std::move(nrf_uri)), options_(std::move(options)) {
  if (options_.log_path) store_ = EventStore(*options_.log_path);
}

Nwdaf::~Nwdaf() {
  if (!base_uri_.empty()) transport_.unbind(base_uri_);
}

std::string Nwdaf::bind() {
  base_uri_ = transport_.bind(options_.instance_id, [this](const sba::Request& r) { return handle(r); });
  return base_uri_;
}

std::string Nwdaf::notify_uri(NfType nf) const {
  return base_uri_ + std::string(kNotifyPrefix) + lower(to_string(nf));
}

std::vector<std::string> Nwdaf::start(const SubscriptionConfig& config) {
  if (base_uri_.empty()) bind();
  sba::NrfClient nrf(transport_, nrf_uri_);
  nrf.register_nf({options_.instance_id, NfType::kNwdaf, {{"nnwdaf-notify", base_uri_}}});

  if (config.entries.empty()) spdlog::warn("NWDAF: subscription config is empty; nothing to collect");

  std::map<NfType, std::string> producers;
  for (const auto& entry : config.entries) {
    if (producers.contains(entry.nf)) continue;
    const auto uris = nrf.discover(entry.nf, service_for(entry.nf));
    if (uris.empty()) {
      throw std::runtime_error("NWDAF startup failed: no " + std::string(to_string(entry.nf)) +
                               " offers " + service_for(entry.nf));
    }
    producers[entry.nf] = uris.front();
  }

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < config.entries.size(); ++i) {
    const auto& entry = config.entries[i];
    nlohmann::json body = {{"subscriber", options_.instance_id}, {"notifyUri", notify_uri(entry.nf)}};
    body["eventKinds"] = nlohmann::json::array();
    for (auto kind : entry.events) body["eventKinds"].push_back(to_string(kind));
    if (entry.supis) {
      body["supiFilter"] = nlohmann::json::array();
      for (const auto& s : *entry.supis) body["supiFilter"].push_back(s.value);
    }
    const std::string path = "/" + service_for(entry.nf) + "/v1/subscriptions";
    const auto started = std::chrono::steady_clock::now();
    const auto resp = transport_.send(sba::Request::with_json(sba::Method::kPost, path, body),
                                      producers[entry.nf]);
    const double ack_ms = elapsed_ms(started);
    if (resp.status != 201) {
      shutdown();
      shut_down_ = false;
      throw std::runtime_error("NWDAF subscription entry " + std::to_string(i) + " (" +
                               std::string(to_string(entry.nf)) + ") rejected with status " +
                               std::to_string(resp.status) + ": " + resp.body);
    }
    const auto id = resp.json().at("subscriptionId").get<std::string>();
    std::lock_guard lock(mutex_);
    metrics_.subscribe_calls += 1;
    metrics_.subscribe_ack_ms_total += ack_ms;
    active_[id] = {id, entry.nf, producers[entry.nf], path + "/" + sba::url_encode(id)};
    ids.push_back(id);
  }
  std::lock_guard lock(mutex_);
  started_ = true;
  shut_down_ = false;
  return ids;
}

void Nwdaf::shutdown() {
  std::map<std::string, ActiveSubscription> doomed;
  {
    std::lock_guard lock(mutex_);
    if (shut_down_) return;
    shut_down_ = true;
    doomed.swap(active_);
  }
  for (const auto& [id, sub] : doomed) {
    try {
      const auto resp = transport_.send({sba::Method::kDelete, sub.resource_path, {}}, sub.nf_base_uri);
      if (resp.status == 404) {
        spdlog::info("NWDAF: subscription {} was already gone", id);
      } else if (!resp.ok()) {
        spdlog::warn("NWDAF: deleting {} returned {}", id, resp.status);
      }
    } catch (const TransportError& e) {
      spdlog::warn("NWDAF: deleting {} failed: {}", id, e.what());
    }
  }
  store_.flush();
}

sba::Response Nwdaf::handle(const sba::Request& request) {
  const auto path = request.path_only();
  if (request.method == sba::Method::kPost && path.starts_with(kNotifyPrefix)) {
    const auto which = path.substr(kNotifyPrefix.size());
    if (which == "amf") return handle_notification(NfType::kAmf, request.body);
    if (which == "smf") return handle_notification(NfType::kSmf, request.body);
  }
  return sba::Response::error(404, "no such resource");
}

sba::Response Nwdaf::handle_notification(NfType from, const std::string& body) {
  const auto started = std::chrono::steady_clock::now();
  auto parsed = nlohmann::json::parse(body, nullptr, false);
  StoredEvent stored;
  try {
    if (parsed.is_discarded() || !parsed.is_object()) throw std::invalid_argument("malformed JSON");
    stored.subscription_id = parsed.at("subscriptionId").get<std::string>();
    stored.event = event_from_json(parsed.at("event"));
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    ++metrics_.malformed;
    return sba::Response::error(400, e.what());
  }

  std::lock_guard lock(mutex_);
  auto it = active_.find(stored.subscription_id);
  if (it == active_.end() || it->second.nf != from) {
    ++metrics_.rejected;
    return sba::Response::error(404, "unknown subscription '" + stored.subscription_id + "'");
  }
  stored.received_at = clock_.now();
  store_.append(std::move(stored));
  ++metrics_.received;
  metrics_.notification_handling_ms_total += elapsed_ms(started);
  return sba::Response::empty(204);
}

std::vector<ActiveSubscription> Nwdaf::active_subscriptions() const {
  std::lock_guard lock(mutex_);
  std::vector<ActiveSubscription> out;
  for (const auto& [_, s] : active_) out.push_back(s);
  return out;
}

NwdafMetrics Nwdaf::metrics() const {
  std::lock_guard lock(mutex_);
  return metrics_;
}

void Nwdaf::set_predictor(std::shared_ptr<const predict::TrainedModel> model,
                          predict::CellGeometry geometry) {
  std::lock_guard lock(mutex_);
  model_ = std::move(model);
  geometry_ = std::move(geometry);
}

std::optional<predict::Prediction> Nwdaf::predict_next_cell(const Supi& supi) const {
  std::shared_ptr<const predict::TrainedModel> model;
  predict::CellGeometry geometry;
  {
    std::lock_guard lock(mutex_);
    model = model_;
    geometry = geometry_;
  }
  if (!model) return std::nullopt;
  const auto context = predict::current_context(store_.events(), supi, clock_.now(), geometry);
  if (!context) return std::nullopt;
  return model->predict(*context);
}

}  // namespace nwtb::nwdaf
