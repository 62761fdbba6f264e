#include "nwtb/nf/exposure.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "nwtb/domain/errors.hpp"
#include "nwtb/domain/event_json.hpp"

namespace nwtb::nf {

bool Subscription::matches(const NetworkEvent& event) const {
  if (!event_kinds.contains(event.kind)) return false;
  return !supi_filter || supi_filter->contains(event.supi);
}

EventExposure::EventExposure(NfType nf, sba::Transport& transport, sba::RetryPolicy policy)
    : nf_(nf), dispatcher_(transport, policy) {
  if (nf != NfType::kAmf && nf != NfType::kSmf) {
    throw std::invalid_argument("event exposure is provided by the AMF and SMF only");
  }
}

std::string EventExposure::service_name() const {
  return nf_ == NfType::kAmf ? "namf-evts" : "nsmf-evts";
}

std::string EventExposure::subscriptions_path() const {
  return "/" + service_name() + "/v1/subscriptions";
}

std::string EventExposure::subscribe(std::string subscriber, std::string notify_uri,
                                     std::set<EventKind> event_kinds,
                                     std::optional<std::set<Supi>> supi_filter) {
  if (event_kinds.empty()) throw ApiError(400, "eventKinds must be non-empty");
  for (auto kind : event_kinds) {
    if (owner_of(kind) != nf_) {
      throw ApiError(400, std::string(to_string(kind)) + " is not an " + std::string(to_string(nf_)) +
                              " event");
    }
  }
  if (!sba::split_uri(notify_uri)) throw ApiError(400, "invalid notifyUri '" + notify_uri + "'");

  char id[32];
  std::snprintf(id, sizeof(id), "%s-SUB-%06llu", std::string(to_string(nf_)).c_str(),
                static_cast<unsigned long long>(++counter_));
  Subscription sub{id, std::move(subscriber), std::move(notify_uri), std::move(event_kinds),
                   std::move(supi_filter)};
  subscriptions_.emplace(sub.subscription_id, sub);
  return sub.subscription_id;
}

void EventExposure::unsubscribe(const std::string& subscription_id) {
  if (subscriptions_.erase(subscription_id) == 0) {
    throw ApiError(404, "unknown subscription '" + subscription_id + "'");
  }
}

std::size_t EventExposure::send_event_notification(const NetworkEvent& event) {
  if (owner_of(event.kind) != nf_) throw std::invalid_argument("event kind not owned by this NF");
  if (const auto violations = validate_event(event); !violations.empty()) {
    throw std::invalid_argument("invalid event: " + violations.front());
  }
  log_.push_back(event);
  std::size_t count = 0;
  for (const auto& [id, sub] : subscriptions_) {
    if (!sub.matches(event)) continue;
    dispatcher_.dispatch(sub.notify_uri, notification_body(id, event).dump(),
                         event.timestamp.offset_s);
    ++count;
  }
  dispatched_ += count;
  return count;
}

std::optional<sba::Response> EventExposure::handle(const sba::Request& request) {
  const auto base = subscriptions_path();
  const auto path = request.path_only();
  if (request.method == sba::Method::kPost && path == base) {
    const auto body = request.json();
    if (!body.is_object()) throw ApiError(400, "subscription body must be an object");
    try {
      std::set<EventKind> kinds;
      for (const auto& k : body.at("eventKinds")) {
        const auto name = k.get<std::string>();
        const auto kind = parse_event_kind(name);
        if (!kind) throw ApiError(400, "unknown event kind '" + name + "'");
        kinds.insert(*kind);
      }
      std::optional<std::set<Supi>> filter;
      if (auto it = body.find("supiFilter"); it != body.end() && !it->is_null()) {
        filter.emplace();
        for (const auto& s : *it) filter->insert(Supi{s.get<std::string>()});
      }
      auto id = subscribe(body.at("subscriber").get<std::string>(),
                          body.at("notifyUri").get<std::string>(), std::move(kinds), std::move(filter));
      return sba::Response::with_json(201, {{"subscriptionId", id}});
    } catch (const nlohmann::json::exception& e) {
      throw ApiError(400, std::string("malformed subscription: ") + e.what());
    }
  }
  if (request.method == sba::Method::kDelete && path.starts_with(base + "/")) {
    unsubscribe(sba::url_decode(std::string_view(path).substr(base.size() + 1)));
    return sba::Response::empty(204);
  }
  return std::nullopt;
}

nlohmann::json notification_body(const std::string& subscription_id, const NetworkEvent& event) {
  return {{"subscriptionId", subscription_id}, {"event", to_json(event)}};
}

}  // namespace nwtb::nf
