#include "nwtb/harness/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "../internal/yaml_config.hpp"

namespace nwtb::harness {
namespace {

using internal::config_error;

const std::set<std::string> kTopLevelKeys = {
    "seed",     "start",    "duration_s", "tick_dt_s", "acceleration", "transport",
    "radio",    "gnbs",     "mobility",   "locations", "weights",      "ues",
    "sessions", "qos_schedule", "areas_of_interest", "nwdaf", "output_dir"};

void reject_unknown(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& what) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) config_error(kv.first, "unknown field '" + key + "' in " + what);
  }
}

YAML::Node require(const YAML::Node& map, const char* key) {
  const auto node = map[key];
  if (!node || node.IsNull()) config_error(map, std::string("missing field '") + key + "'");
  return node;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) config_error(node, "field '" + field + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    config_error(node, "field '" + field + "' has the wrong type");
  }
}

template <typename T>
T get(const YAML::Node& map, const char* key) {
  return scalar<T>(require(map, key), key);
}

template <typename T>
T get_or(const YAML::Node& map, const char* key, T fallback) {
  const auto node = map[key];
  if (!node || node.IsNull()) return fallback;
  return scalar<T>(node, key);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void expect_map(const YAML::Node& node, const std::string& what) {
  if (!node.IsMap()) config_error(node, what + " must be a mapping");
}

void expect_seq(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) config_error(node, what + " must be a list");
}

// Wraps std::invalid_argument from module validators with the node's line.
template <typename F>
void checked(const YAML::Node& node, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    config_error(node, e.what());
  }
}

mobility::NormalDuration duration(const YAML::Node& map, const char* key, mobility::NormalDuration fallback) {
  const auto node = map[key];
  if (!node) return fallback;
  expect_map(node, std::string("'") + key + "'");
  reject_unknown(node, {"mean_s", "std_s"}, key);
  mobility::NormalDuration d{get<double>(node, "mean_s"), get<double>(node, "std_s")};
  if (!(d.mean_s > 0.0) || !(d.std_s >= 0.0)) config_error(node, std::string("'") + key + "' needs mean_s > 0, std_s >= 0");
  return d;
}

ByteRange byte_range(const YAML::Node& map, const char* key, ByteRange fallback) {
  const auto node = map[key];
  if (!node) return fallback;
  expect_seq(node, std::string("'") + key + "'");
  if (node.size() != 2) config_error(node, std::string("'") + key + "' must be [min, max]");
  ByteRange r{scalar<std::uint64_t>(node[0], key), scalar<std::uint64_t>(node[1], key)};
  if (r.min > r.max) config_error(node, std::string("'") + key + "' must have min <= max");
  return r;
}

Scenario from_yaml(const YAML::Node& root) {
  if (!root.IsMap()) config_error(root, "scenario must be a mapping");
  reject_unknown(root, kTopLevelKeys, "scenario");
  Scenario s;
  s.seed = get_or<std::uint64_t>(root, "seed", s.seed);
  s.start_utc = get_or<std::string>(root, "start", s.start_utc);
  const auto epoch = parse_utc_seconds(s.start_utc);
  if (!epoch) config_error(root["start"], "field 'start' must be a whole-second UTC time like 2025-03-03T00:00:00Z");
  s.start_epoch_s = *epoch;
  s.duration_s = get_or<double>(root, "duration_s", s.duration_s);
  s.tick_dt_s = get_or<double>(root, "tick_dt_s", s.tick_dt_s);
  if (const auto acc = root["acceleration"]; acc && !acc.IsNull()) {
    const auto text = scalar<std::string>(acc, "acceleration");
    if (lower(text) != "max") {
      s.acceleration = scalar<double>(acc, "acceleration");
      if (!(*s.acceleration > 0.0)) config_error(acc, "field 'acceleration' must be > 0 or \"max\"");
    }
  }
  if (const auto t = root["transport"]; t && !t.IsNull()) {
    const auto name = lower(scalar<std::string>(t, "transport"));
    if (name == "inproc") s.transport = sba::TransportKind::kInProc;
    else if (name == "tcp") s.transport = sba::TransportKind::kTcp;
    else config_error(t, "field 'transport' must be inproc or tcp");
  }

  if (const auto radio = root["radio"]; radio && !radio.IsNull()) {
    expect_map(radio, "'radio'");
    reject_unknown(radio, {"dbm_per_unit", "hysteresis_db"}, "radio");
    s.radio.dbm_per_unit = get_or<double>(radio, "dbm_per_unit", s.radio.dbm_per_unit);
    s.radio.hysteresis_db = get_or<double>(radio, "hysteresis_db", s.radio.hysteresis_db);
    checked(radio, [&] { ran::validate(s.radio); });
  }

  const auto gnbs = require(root, "gnbs");
  expect_seq(gnbs, "'gnbs'");
  for (const auto& g : gnbs) {
    expect_map(g, "gnb entry");
    reject_unknown(g, {"id", "tac", "x", "y", "radius", "threshold_dbm"}, "gnb");
    ran::CellSite site;
    site.cell = CellId{get<std::string>(g, "id"), get<int>(g, "tac")};
    site.position = {get<double>(g, "x"), get<double>(g, "y")};
    site.coverage_radius = get_or<double>(g, "radius", site.coverage_radius);
    site.threshold_dbm = get_or<double>(g, "threshold_dbm", -site.coverage_radius * s.radio.dbm_per_unit);
    checked(g, [&] { ran::validate(site); });
    for (const auto& other : s.gnbs) {
      if (other.cell.id == site.cell.id) config_error(g, "duplicate gnb id '" + site.cell.id + "'");
      if (other.cell.tac == site.cell.tac) config_error(g, "duplicate TAC " + std::to_string(site.cell.tac));
    }
    s.gnbs.push_back(site);
  }

  auto& world = s.world;
  if (const auto m = root["mobility"]; m && !m.IsNull()) {
    expect_map(m, "'mobility'");
    reject_unknown(m, {"epsilon", "v_min", "v_max", "dwell_floor_s", "speed_modifiers"}, "mobility");
    world.profile.epsilon = get_or<double>(m, "epsilon", world.profile.epsilon);
    world.profile.v_min = get_or<double>(m, "v_min", world.profile.v_min);
    world.profile.v_max = get_or<double>(m, "v_max", world.profile.v_max);
    world.profile.dwell_floor_s = get_or<double>(m, "dwell_floor_s", world.profile.dwell_floor_s);
    if (const auto mods = m["speed_modifiers"]; mods && !mods.IsNull()) {
      expect_seq(mods, "'speed_modifiers'");
      for (const auto& mod : mods) {
        reject_unknown(mod, {"type", "category", "factor"}, "speed modifier");
        const auto cat_node = require(mod, "category");
        const auto cat = parse_time_category(scalar<std::string>(cat_node, "category"));
        if (!cat) config_error(cat_node, "unknown time category");
        world.profile.speed_modifiers[{get<std::string>(mod, "type"), *cat}] = get<double>(mod, "factor");
      }
    }
    checked(m, [&] { mobility::validate(world.profile); });
  }

  const auto locations = require(root, "locations");
  expect_seq(locations, "'locations'");
  std::map<std::string, std::size_t> location_index;
  for (const auto& l : locations) {
    expect_map(l, "location entry");
    reject_unknown(l, {"name", "type", "x", "y", "dwell_mean_s", "dwell_std_s", "owner"}, "location");
    mobility::ActivityLocation loc;
    loc.name = get<std::string>(l, "name");
    loc.activity_type = get<std::string>(l, "type");
    loc.position = {get<double>(l, "x"), get<double>(l, "y")};
    loc.dwell_mean_s = get<double>(l, "dwell_mean_s");
    loc.dwell_std_s = get_or<double>(l, "dwell_std_s", 0.0);
    if (const auto owner = l["owner"]; owner && !owner.IsNull()) loc.personal_owner = Supi{scalar<std::string>(owner, "owner")};
    checked(l, [&] { mobility::validate(loc); });
    if (!location_index.emplace(loc.name, world.locations.size()).second) {
      config_error(l, "duplicate location '" + loc.name + "'");
    }
    world.locations.push_back(std::move(loc));
  }

  const auto weights = require(root, "weights");
  expect_map(weights, "'weights'");
  for (const auto& kv : weights) {
    const auto cat = parse_time_category(kv.first.as<std::string>());
    if (!cat) config_error(kv.first, "unknown time category '" + kv.first.as<std::string>() + "'");
    expect_map(kv.second, "weights." + kv.first.as<std::string>());
    auto& w = world.weights.by_category[*cat];
    for (const auto& tw : kv.second) w[tw.first.as<std::string>()] = scalar<double>(tw.second, "weight");
  }
  for (auto t : kAllTimeCategories) {
    if (!world.weights.by_category.contains(t)) {
      config_error(weights, "weights missing time category '" + std::string(to_string(t)) + "'");
    }
  }
  checked(weights, [&] { mobility::validate(world.weights, world.locations); });

  auto find_location = [&](const YAML::Node& node, const std::string& field) {
    const auto name = scalar<std::string>(node, field);
    const auto it = location_index.find(name);
    if (it == location_index.end()) config_error(node, "unknown location '" + name + "' in field '" + field + "'");
    return it->second;
  };

  const auto ues = require(root, "ues");
  expect_seq(ues, "'ues'");
  for (const auto& u : ues) {
    expect_map(u, "ue entry");
    reject_unknown(u, {"supi", "mode", "home", "work", "on", "off", "duration_floor_s", "itinerary"}, "ue");
    mobility::UeBehavior b;
    b.supi = Supi{get<std::string>(u, "supi")};
    const auto mode = lower(get_or<std::string>(u, "mode", "dynamic"));
    if (mode == "dynamic") b.mode = mobility::UeMode::kDynamic;
    else if (mode == "always_on") b.mode = mobility::UeMode::kAlwaysOn;
    else config_error(u["mode"], "field 'mode' must be dynamic or always_on");
    b.home = find_location(require(u, "home"), "home");
    if (const auto w = u["work"]; w && !w.IsNull()) b.work = find_location(w, "work");
    b.on_duration = duration(u, "on", b.on_duration);
    b.off_duration = duration(u, "off", b.off_duration);
    b.duration_floor_s = get_or<double>(u, "duration_floor_s", b.duration_floor_s);
    if (const auto it = u["itinerary"]; it && !it.IsNull()) {
      expect_seq(it, "'itinerary'");
      for (const auto& stop : it) b.itinerary.push_back(find_location(stop, "itinerary"));
      if (b.itinerary.size() < 2) config_error(it, "'itinerary' needs at least two stops");
    }
    const auto& home = world.locations[b.home];
    if (home.activity_type != "home" || !home.accessible_to(b.supi)) {
      config_error(u["home"], "home of " + b.supi.value + " must be a home location it owns");
    }
    if (b.work) {
      const auto& work = world.locations[*b.work];
      if (work.activity_type != "work" || !work.accessible_to(b.supi)) {
        config_error(u["work"], "work of " + b.supi.value + " must be a work location it owns");
      }
    }
    for (const auto& other : s.ues) {
      if (other.supi == b.supi) config_error(u, "duplicate supi '" + b.supi.value + "'");
    }
    s.ues.push_back(std::move(b));
  }

  if (const auto sess = root["sessions"]; sess && !sess.IsNull()) {
    expect_map(sess, "'sessions'");
    reject_unknown(sess, {"enabled", "dnn", "report_interval_s", "bytes_up", "bytes_down"}, "sessions");
    s.sessions.enabled = get_or<bool>(sess, "enabled", s.sessions.enabled);
    s.sessions.dnn = get_or<std::string>(sess, "dnn", s.sessions.dnn);
    s.sessions.report_interval_s = get_or<double>(sess, "report_interval_s", s.sessions.report_interval_s);
    if (!(s.sessions.report_interval_s > 0.0)) config_error(sess, "field 'report_interval_s' must be > 0");
    s.sessions.bytes_up = byte_range(sess, "bytes_up", s.sessions.bytes_up);
    s.sessions.bytes_down = byte_range(sess, "bytes_down", s.sessions.bytes_down);
  }

  if (const auto qos = root["qos_schedule"]; qos && !qos.IsNull()) {
    expect_seq(qos, "'qos_schedule'");
    for (const auto& q : qos) {
      reject_unknown(q, {"at_s", "supi", "five_qi"}, "qos change");
      QosChange c{get<double>(q, "at_s"), Supi{get<std::string>(q, "supi")}, get<int>(q, "five_qi")};
      if (c.five_qi < 1 || c.five_qi > 255) config_error(q, "field 'five_qi' must be in [1, 255]");
      s.qos_schedule.push_back(std::move(c));
    }
  }

  if (const auto aois = root["areas_of_interest"]; aois && !aois.IsNull()) {
    expect_seq(aois, "'areas_of_interest'");
    for (const auto& a : aois) {
      reject_unknown(a, {"id", "x_min", "y_min", "x_max", "y_max"}, "area of interest");
      nf::AreaOfInterest area{get<std::string>(a, "id"), get<double>(a, "x_min"), get<double>(a, "y_min"),
                              get<double>(a, "x_max"), get<double>(a, "y_max")};
      if (!(area.x_min <= area.x_max && area.y_min <= area.y_max)) config_error(a, "area bounds are inverted");
      s.areas_of_interest.push_back(std::move(area));
    }
  }

  if (const auto n = root["nwdaf"]; n && !n.IsNull()) {
    s.nwdaf_config = internal::subscription_config_from_yaml(n);
  } else {
    s.nwdaf_config = nwdaf::subscribe_all_config();
  }
  s.output_dir = get_or<std::string>(root, "output_dir", s.output_dir.string());

  try {
    validate(s);
  } catch (const ConfigError& e) {
    config_error(root, e.what());
  }
  return s;
}

}  // namespace

std::uint64_t Scenario::ticks() const { return static_cast<std::uint64_t>(std::llround(duration_s / tick_dt_s)); }

void validate(const Scenario& s) {
  if (s.gnbs.empty()) throw ConfigError("at least one gnb is required");
  if (s.ues.empty()) throw ConfigError("at least one ue is required");
  if (!(s.duration_s > 0.0) || !(s.tick_dt_s > 0.0)) throw ConfigError("duration_s and tick_dt_s must be > 0");
  const double ratio = s.duration_s / s.tick_dt_s;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("duration_s must be a whole number of ticks");
  }
  for (const auto& q : s.qos_schedule) {
    const bool known = std::any_of(s.ues.begin(), s.ues.end(), [&](const auto& u) { return u.supi == q.supi; });
    if (!known) throw ConfigError("qos_schedule references unknown supi '" + q.supi.value + "'");
  }
  for (const auto& u : s.ues) {
    if (u.home >= s.world.locations.size()) throw ConfigError("unknown location for home of " + u.supi.value);
    const auto& home = s.world.locations[u.home].position;
    const bool covered = std::any_of(s.gnbs.begin(), s.gnbs.end(), [&](const ran::CellSite& g) {
      return ran::rsrp(g, home, s.radio) >= g.threshold_dbm;
    });
    if (!covered) throw ConfigError("home of " + u.supi.value + " is outside every cell");
  }
}

Scenario parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  return from_yaml(root);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

predict::CellGeometry cell_geometry(const std::vector<ran::CellSite>& gnbs) {
  predict::CellGeometry g;
  for (const auto& site : gnbs) g[site.cell.id] = {site.cell, site.position};
  return g;
}

}  // namespace nwtb::harness
