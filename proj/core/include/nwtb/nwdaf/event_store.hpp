#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwtb/domain/event.hpp"

namespace nwtb::nwdaf {

struct StoredEvent {
  NetworkEvent event;
  std::string subscription_id;
  SimInstant received_at;

  friend bool operator==(const StoredEvent&, const StoredEvent&) = default;
};

// {"event": <canonical event>, "receivedAt": <timestamp>, "subscriptionId": "..."}
nlohmann::json to_json(const StoredEvent& stored);
StoredEvent stored_event_from_json(const nlohmann::json& j);
std::string to_ndjson_line(const StoredEvent& stored);

struct ReplayResult {
  std::vector<StoredEvent> events;
  std::size_t corrupt_lines = 0;
  std::size_t total_lines = 0;
};

// Reads an NDJSON log, skipping (and counting) lines that fail to parse.
ReplayResult replay_log(const std::filesystem::path& path);

// Append-only event store, optionally mirrored to an NDJSON file.
// Appends and snapshots are mutually exclusive.
class EventStore {
 public:
  enum class OpenMode { kTruncate, kAppend };

  EventStore() = default;
  explicit EventStore(const std::filesystem::path& path, OpenMode mode = OpenMode::kTruncate);

  // Replays an existing log and continues appending to it.
  static EventStore reopen(const std::filesystem::path& path);

  void append(StoredEvent stored);
  std::vector<StoredEvent> snapshot() const;
  std::vector<NetworkEvent> events() const;
  std::size_t size() const;
  void flush();
  const std::optional<std::filesystem::path>& path() const { return path_; }

  EventStore(EventStore&& other) noexcept;
  EventStore& operator=(EventStore&& other) noexcept;

 private:
  mutable std::mutex mutex_;
  std::vector<StoredEvent> events_;
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
};

}  // namespace nwtb::nwdaf
