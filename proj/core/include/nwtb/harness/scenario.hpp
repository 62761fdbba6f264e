#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nwtb/mobility/ue_agent.hpp"
#include "nwtb/nf/amf.hpp"
#include "nwtb/nwdaf/config.hpp"
#include "nwtb/predict/features.hpp"
#include "nwtb/ran/radio.hpp"
#include "nwtb/sba/transport.hpp"

namespace nwtb::harness {

struct ByteRange {
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

// Every registered UE holds one PDU session; each ACTIVE session reports a
// traffic delta every report_interval_s while the UE is connected.
struct SessionConfig {
  bool enabled = true;
  std::string dnn = "internet";
  double report_interval_s = 60.0;
  ByteRange bytes_up{1'000, 200'000};
  ByteRange bytes_down{10'000, 2'000'000};
};

// Switches the 5QI of every active session of `supi` at `at_s`.
struct QosChange {
  double at_s = 0.0;
  Supi supi;
  int five_qi = 9;
};

struct Scenario {
  std::uint64_t seed = 42;
  std::string start_utc = "2025-03-03T00:00:00Z";
  std::int64_t start_epoch_s = 0;
  double duration_s = 86'400.0;
  double tick_dt_s = 1.0;
  std::optional<double> acceleration;  // simulated seconds per wall second; nullopt: max
  sba::TransportKind transport = sba::TransportKind::kInProc;
  std::vector<ran::CellSite> gnbs;
  ran::RadioConfig radio;
  mobility::MobilityWorld world;
  std::vector<mobility::UeBehavior> ues;
  SessionConfig sessions;
  std::vector<QosChange> qos_schedule;
  std::vector<nf::AreaOfInterest> areas_of_interest;
  nwdaf::SubscriptionConfig nwdaf_config;
  std::filesystem::path output_dir = "out";

  std::uint64_t ticks() const;
};

// Throws ConfigError ("line N: ...") naming the offending field.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& yaml_text);
// Cross-field checks shared by the loader and programmatic callers.
void validate(const Scenario& scenario);

predict::CellGeometry cell_geometry(const std::vector<ran::CellSite>& gnbs);

}  // namespace nwtb::harness
