#include "nwtb/nwdaf/event_store.hpp"

#include <stdexcept>

#include "nwtb/domain/event_json.hpp"

namespace nwtb::nwdaf {

nlohmann::json to_json(const StoredEvent& stored) {
  return {{"event", nwtb::to_json(stored.event)},
          {"receivedAt", nwtb::to_json(stored.received_at)},
          {"subscriptionId", stored.subscription_id}};
}

StoredEvent stored_event_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("log line must be an object");
  StoredEvent s;
  s.event = event_from_json(j.at("event"));
  s.received_at = instant_from_json(j.at("receivedAt"));
  s.subscription_id = j.at("subscriptionId").get<std::string>();
  return s;
}

std::string to_ndjson_line(const StoredEvent& stored) { return to_json(stored).dump(); }

ReplayResult replay_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event log " + path.string());
  ReplayResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++result.total_lines;
    try {
      result.events.push_back(stored_event_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception&) {
      ++result.corrupt_lines;
    }
  }
  return result;
}

EventStore::EventStore(const std::filesystem::path& path, OpenMode mode) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, mode == OpenMode::kTruncate ? std::ios::trunc | std::ios::out
                                              : std::ios::app | std::ios::out);
  if (!out_) throw std::runtime_error("cannot open event log " + path.string() + " for writing");
}

EventStore EventStore::reopen(const std::filesystem::path& path) {
  auto replayed = replay_log(path);
  if (replayed.corrupt_lines > 0) {
    throw std::runtime_error("event log " + path.string() + " has corrupt lines");
  }
  EventStore store(path, OpenMode::kAppend);
  store.events_ = std::move(replayed.events);
  return store;
}

EventStore::EventStore(EventStore&& other) noexcept {
  std::lock_guard lock(other.mutex_);
  events_ = std::move(other.events_);
  path_ = std::move(other.path_);
  out_ = std::move(other.out_);
}

EventStore& EventStore::operator=(EventStore&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mutex_, other.mutex_);
    events_ = std::move(other.events_);
    path_ = std::move(other.path_);
    out_ = std::move(other.out_);
  }
  return *this;
}

void EventStore::append(StoredEvent stored) {
  std::lock_guard lock(mutex_);
  if (out_.is_open()) out_ << to_ndjson_line(stored) << '\n';
  events_.push_back(std::move(stored));
}

std::vector<StoredEvent> EventStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::vector<NetworkEvent> EventStore::events() const {
  std::lock_guard lock(mutex_);
  std::vector<NetworkEvent> out;
  out.reserve(events_.size());
  for (const auto& s : events_) out.push_back(s.event);
  return out;
}

std::size_t EventStore::size() const {
  std::lock_guard lock(mutex_);
  return events_.size();
}

void EventStore::flush() {
  std::lock_guard lock(mutex_);
  if (out_.is_open()) out_.flush();
}

}  // namespace nwtb::nwdaf
