#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwtb/domain/event.hpp"
#include "nwtb/sba/dispatcher.hpp"
#include "nwtb/sba/message.hpp"

namespace nwtb::nf {

struct Subscription {
  std::string subscription_id;
  std::string subscriber;
  std::string notify_uri;
  std::set<EventKind> event_kinds;
  std::optional<std::set<Supi>> supi_filter;

  bool matches(const NetworkEvent& event) const;
};

// Subscription store, event matching and notification dispatch shared by
// the AMF and SMF. Not synchronized; the owning NF serializes access.
class EventExposure {
 public:
  EventExposure(NfType nf, sba::Transport& transport, sba::RetryPolicy policy = {});

  NfType nf() const { return nf_; }
  // "namf-evts" or "nsmf-evts".
  std::string service_name() const;
  // "/namf-evts/v1/subscriptions" or "/nsmf-evts/v1/subscriptions".
  std::string subscriptions_path() const;

  // Returns "<NF>-SUB-NNNNNN". Throws ApiError(400) for empty kinds, kinds
  // owned by the other NF, or an invalid notify URI.
  std::string subscribe(std::string subscriber, std::string notify_uri,
                        std::set<EventKind> event_kinds,
                        std::optional<std::set<Supi>> supi_filter = std::nullopt);
  // Throws ApiError(404) for an unknown id.
  void unsubscribe(const std::string& subscription_id);

  // Appends `event` to the local log and POSTs one notification per
  // matching subscription. Returns the number of notifications posted.
  std::size_t send_event_notification(const NetworkEvent& event);

  // Handles POST/DELETE under subscriptions_path(); nullopt for other paths.
  std::optional<sba::Response> handle(const sba::Request& request);

  const std::map<std::string, Subscription>& subscriptions() const { return subscriptions_; }
  const std::vector<NetworkEvent>& log() const { return log_; }
  std::uint64_t dispatched() const { return dispatched_; }
  sba::NotificationDispatcher& dispatcher() { return dispatcher_; }
  const sba::NotificationDispatcher& dispatcher() const { return dispatcher_; }

 private:
  NfType nf_;
  sba::NotificationDispatcher dispatcher_;
  std::uint64_t counter_ = 0;
  std::map<std::string, Subscription> subscriptions_;
  std::vector<NetworkEvent> log_;
  std::uint64_t dispatched_ = 0;
};

nlohmann::json notification_body(const std::string& subscription_id, const NetworkEvent& event);

}  // namespace nwtb::nf
