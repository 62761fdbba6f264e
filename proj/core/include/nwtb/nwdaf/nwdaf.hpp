#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nwtb/domain/time.hpp"
#include "nwtb/nwdaf/config.hpp"
#include "nwtb/nwdaf/event_store.hpp"
#include "nwtb/predict/features.hpp"
#include "nwtb/predict/model.hpp"
#include "nwtb/sba/registry.hpp"
#include "nwtb/sba/transport.hpp"

namespace nwtb::nwdaf {

struct NwdafOptions {
  std::string instance_id = "nwdaf-1";
  std::optional<std::filesystem::path> log_path;
};

// Wall-clock measurements; informational only.
struct NwdafMetrics {
  std::uint64_t received = 0;
  std::uint64_t rejected = 0;
  std::uint64_t malformed = 0;
  double subscribe_ack_ms_total = 0.0;
  std::uint64_t subscribe_calls = 0;
  double notification_handling_ms_total = 0.0;

  double mean_subscribe_ack_ms() const {
    return subscribe_calls ? subscribe_ack_ms_total / static_cast<double>(subscribe_calls) : 0.0;
  }
  double mean_notification_ms() const {
    return received ? notification_handling_ms_total / static_cast<double>(received) : 0.0;
  }
};

struct ActiveSubscription {
  std::string subscription_id;
  NfType nf = NfType::kAmf;
  std::string nf_base_uri;
  std::string resource_path;  // .../subscriptions/{id}
};

// The analytics function: registers with the NRF, subscribes to AMF/SMF
// events, stores received notifications and serves next-cell predictions.
// Notification endpoint: POST {base}/nwdaf-notify/v1/{amf|smf}.
class Nwdaf {
 public:
  Nwdaf(sba::Transport& transport, const SimClock& clock, std::string nrf_uri,
        NwdafOptions options = {});
  ~Nwdaf();

  Nwdaf(const Nwdaf&) = delete;
  Nwdaf& operator=(const Nwdaf&) = delete;

  std::string bind();
  const std::string& base_uri() const { return base_uri_; }
  std::string notify_uri(NfType nf) const;

  // Registers with the NRF, discovers the producers the config needs and
  // subscribes once per entry. Throws std::runtime_error if a producer
  // cannot be discovered or a subscription is rejected (already created
  // subscriptions are withdrawn first).
  std::vector<std::string> start(const SubscriptionConfig& config);

  // Deletes every active subscription (404 tolerated) and flushes the
  // store. Idempotent.
  void shutdown();

  sba::Response handle(const sba::Request& request);
  sba::Response handle_notification(NfType from, const std::string& body);

  const EventStore& store() const { return store_; }
  EventStore& store() { return store_; }
  std::vector<ActiveSubscription> active_subscriptions() const;
  NwdafMetrics metrics() const;

  // Installs a trained next-cell model and the cell layout it was trained on.
  void set_predictor(std::shared_ptr<const predict::TrainedModel> model,
                     predict::CellGeometry geometry);
  // Predicts the next handover target for `supi` from its stored history.
  // nullopt if no model is installed or the UE has no serving cell yet.
  std::optional<predict::Prediction> predict_next_cell(const Supi& supi) const;

 private:
  sba::Transport& transport_;
  const SimClock& clock_;
  std::string nrf_uri_;
  NwdafOptions options_;
  std::string base_uri_;
  EventStore store_;

  mutable std::mutex mutex_;
  std::map<std::string, ActiveSubscription> active_;
  bool started_ = false;
  bool shut_down_ = false;
  NwdafMetrics metrics_;
  std::shared_ptr<const predict::TrainedModel> model_;
  predict::CellGeometry geometry_;
};

}  // namespace nwtb::nwdaf
