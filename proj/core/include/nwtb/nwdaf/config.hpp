#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nwtb/domain/event.hpp"

namespace nwtb::nwdaf {

struct SubscriptionEntry {
  NfType nf = NfType::kAmf;
  std::vector<EventKind> events;
  std::optional<std::vector<Supi>> supis;
};

// Events the NWDAF subscribes to at startup.
struct SubscriptionConfig {
  std::vector<SubscriptionEntry> entries;
};

// YAML schema:
//   subscriptions:
//     - {nf: amf, events: [HANDOVER, ...], supis: [imsi-...]}
// Throws ConfigError with a line number on schema violations.
SubscriptionConfig parse_subscription_config(const std::string& yaml_text);
SubscriptionConfig load_subscription_config(const std::filesystem::path& path);

// Every AMF and SMF event kind, unfiltered.
SubscriptionConfig subscribe_all_config();

}  // namespace nwtb::nwdaf
