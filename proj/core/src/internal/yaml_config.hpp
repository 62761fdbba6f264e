#pragma once

#include <string>

#include <yaml-cpp/yaml.h>

#include "nwtb/domain/errors.hpp"
#include "nwtb/nwdaf/config.hpp"

namespace nwtb::internal {

inline std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.line < 0) return "";
  return "line " + std::to_string(mark.line + 1) + ": ";
}

[[noreturn]] inline void config_error(const YAML::Node& node, const std::string& message) {
  throw ConfigError(where(node) + message);
}

nwdaf::SubscriptionConfig subscription_config_from_yaml(const YAML::Node& root);

}  // namespace nwtb::internal
