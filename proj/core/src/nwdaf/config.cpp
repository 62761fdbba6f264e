#include "nwtb/nwdaf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "../internal/yaml_config.hpp"

namespace nwtb {
namespace internal {

nwdaf::SubscriptionConfig subscription_config_from_yaml(const YAML::Node& root) {
  nwdaf::SubscriptionConfig config;
  if (!root || root.IsNull()) return config;
  if (!root.IsMap()) config_error(root, "NWDAF config must be a mapping");
  const auto subs = root["subscriptions"];
  if (!subs || subs.IsNull()) return config;
  if (!subs.IsSequence()) config_error(subs, "'subscriptions' must be a list");
  for (const auto& item : subs) {
    if (!item.IsMap()) config_error(item, "subscription entry must be a mapping");
    nwdaf::SubscriptionEntry entry;
    const auto nf_node = item["nf"];
    if (!nf_node) config_error(item, "subscription entry is missing 'nf'");
    auto nf_name = nf_node.as<std::string>();
    std::transform(nf_name.begin(), nf_name.end(), nf_name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    const auto nf = parse_nf_type(nf_name);
    if (!nf || *nf == NfType::kNwdaf) config_error(nf_node, "unknown nf '" + nf_node.as<std::string>() + "'");
    entry.nf = *nf;
    const auto events = item["events"];
    if (!events || !events.IsSequence() || events.size() == 0) {
      config_error(item, "subscription entry needs a non-empty 'events' list");
    }
    for (const auto& ev : events) {
      const auto name = ev.as<std::string>();
      const auto kind = parse_event_kind(name);
      if (!kind) config_error(ev, "unknown event kind '" + name + "'");
      if (owner_of(*kind) != entry.nf) {
        config_error(ev, name + " is not an " + std::string(to_string(entry.nf)) + " event");
      }
      entry.events.push_back(*kind);
    }
    if (const auto supis = item["supis"]; supis && !supis.IsNull()) {
      if (!supis.IsSequence()) config_error(supis, "'supis' must be a list");
      entry.supis.emplace();
      for (const auto& s : supis) entry.supis->push_back(Supi{s.as<std::string>()});
    }
    config.entries.push_back(std::move(entry));
  }
  return config;
}

}  // namespace internal

namespace nwdaf {

SubscriptionConfig parse_subscription_config(const std::string& yaml_text) {
  try {
    return internal::subscription_config_from_yaml(YAML::Load(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.what());
  }
}

SubscriptionConfig load_subscription_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open NWDAF config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_subscription_config(ss.str());
}

SubscriptionConfig subscribe_all_config() {
  SubscriptionConfig config;
  config.entries.push_back({NfType::kAmf, {std::begin(kAmfEventKinds), std::end(kAmfEventKinds)}, {}});
  config.entries.push_back({NfType::kSmf, {std::begin(kSmfEventKinds), std::end(kSmfEventKinds)}, {}});
  return config;
}

}  // namespace nwdaf
}  // namespace nwtb
