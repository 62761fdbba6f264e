#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "nwtb/domain/errors.hpp"
#include "nwtb/domain/event_json.hpp"
#include "nwtb/nf/amf.hpp"
#include "nwtb/nf/smf.hpp"
#include "nwtb/nwdaf/nwdaf.hpp"
#include "nwtb/sba/inproc_transport.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace nwtb;
using namespace nwtb::nwdaf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("nwtb-nwdaf-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config_error(const std::string& yaml) {
  try {
    parse_subscription_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(NwdafConfig, ParsesEntries) {
  const auto c = parse_subscription_config(R"(
subscriptions:
  - nf: amf
    events: [HANDOVER, REGISTRATION_STATE]
  - nf: SMF
    events: [QOS_CHANGE]
    supis: [imsi-1]
)");
  ASSERT_EQ(c.entries.size(), 2u);
  EXPECT_EQ(c.entries[0].nf, NfType::kAmf);
  EXPECT_EQ(c.entries[0].events, (std::vector{EventKind::kHandover, EventKind::kRegistrationState}));
  EXPECT_FALSE(c.entries[0].supis);
  EXPECT_EQ(c.entries[1].supis, (std::vector{Supi{"imsi-1"}}));
  EXPECT_TRUE(parse_subscription_config("").entries.empty());
  EXPECT_EQ(subscribe_all_config().entries.size(), 2u);
}

TEST(NwdafConfig, ErrorsCarryLineNumbers) {
  EXPECT_EQ(config_error("subscriptions:\n  - nf: amf\n    events: [TELEPORT]\n"),
            "line 3: unknown event kind 'TELEPORT'");
  EXPECT_EQ(config_error("subscriptions:\n  - nf: amf\n    events: [QOS_CHANGE]\n"),
            "line 3: QOS_CHANGE is not an AMF event");
  EXPECT_EQ(config_error("subscriptions:\n  - nf: upf\n    events: [QOS_CHANGE]\n"), "line 2: unknown nf 'upf'");
  EXPECT_EQ(config_error("subscriptions:\n  - nf: amf\n"), "line 2: subscription entry needs a non-empty 'events' list");
  EXPECT_FALSE(config_error("subscriptions: [").empty());
  EXPECT_THROW(load_subscription_config("/nonexistent/nwdaf.yaml"), ConfigError);
}

TEST(EventStore, AppendsAndReplays) {
  const auto dir = temp_dir("store");
  const auto path = dir / "log.ndjson";
  fixture::EventGen gen(7);
  std::vector<StoredEvent> written;
  {
    EventStore store(path);
    for (int i = 0; i < 200; ++i) {
      StoredEvent s{gen.event(), "AMF-SUB-000001", {1740960000, static_cast<double>(i)}};
      written.push_back(s);
      store.append(s);
    }
    store.flush();
    EXPECT_EQ(store.size(), 200u);
  }
  const auto replay = replay_log(path);
  EXPECT_EQ(replay.corrupt_lines, 0u);
  EXPECT_EQ(replay.total_lines, 200u);
  EXPECT_EQ(replay.events, written);

  {
    auto reopened = EventStore::reopen(path);
    EXPECT_EQ(reopened.size(), 200u);
    reopened.append(written.front());
    reopened.flush();
  }
  {
    std::ofstream out(path, std::ios::app);
    out << "{not json\n" << R"({"event":{"kind":"HANDOVER"}})" << "\n";
  }
  const auto again = replay_log(path);
  EXPECT_EQ(again.corrupt_lines, 2u);
  EXPECT_EQ(again.total_lines, 203u);
  EXPECT_EQ(again.events.size(), 201u);
  EXPECT_THROW(EventStore::reopen(path), std::runtime_error);
}

namespace {

struct Deployment : ::testing::Test {
  sba::InProcTransport transport;
  sba::NrfRegistry registry;
  SimClock clock{1740960000};
  std::string nrf_uri;
  nf::Amf amf{transport};
  nf::Smf smf{transport};

  void SetUp() override {
    nrf_uri = transport.bind("nrf", registry.handler());
    amf.bind();
    smf.bind();
    amf.connect_smf(smf.base_uri());
    sba::NrfClient nrf(transport, nrf_uri);
    nrf.register_nf(amf.profile());
    nrf.register_nf(smf.profile());
  }
};

}  // namespace

TEST_F(Deployment, CollectsEveryNotification) {
  const auto dir = temp_dir("deploy");
  Nwdaf nwdaf(transport, clock, nrf_uri, {"nwdaf-1", dir / "events.ndjson"});
  const auto ids = nwdaf.start(subscribe_all_config());
  EXPECT_EQ(ids, (std::vector<std::string>{"AMF-SUB-000001", "SMF-SUB-000001"}));
  EXPECT_EQ(registry.discover(NfType::kNwdaf, "nnwdaf-notify").size(), 1u);

  const Supi ue{"imsi-1"};
  clock.set(1);
  amf.register_ue(ue, {"C1", 1}, clock.now());
  const auto [sid, _] = smf.establish(ue, "internet", {"C1", 1}, clock.now());
  clock.set(2);
  amf.handover(ue, {"C2", 2}, clock.now());
  clock.set(3);
  amf.deregister_ue(ue, clock.now());

  const auto dispatched = amf.exposure().dispatched() + smf.exposure().dispatched();
  EXPECT_EQ(nwdaf.store().size(), dispatched);
  EXPECT_EQ(nwdaf.store().size(), amf.exposure().log().size() + smf.exposure().log().size());
  EXPECT_EQ(nwdaf.metrics().received, dispatched);

  nwdaf.shutdown();
  EXPECT_TRUE(amf.exposure().subscriptions().empty());
  EXPECT_TRUE(smf.exposure().subscriptions().empty());
  nwdaf.shutdown();
  EXPECT_EQ(replay_log(dir / "events.ndjson").events.size(), dispatched);
}

TEST_F(Deployment, RejectsForeignAndMalformedNotifications) {
  Nwdaf nwdaf(transport, clock, nrf_uri);
  nwdaf.start(subscribe_all_config());
  const auto event = to_json(fixture::handover(1, "imsi-1", "C1", "C2"));
  EXPECT_EQ(nwdaf.handle_notification(NfType::kAmf, nlohmann::json{{"subscriptionId", "AMF-SUB-000001"}, {"event", event}}.dump())
                .status,
            204);
  EXPECT_EQ(nwdaf.handle_notification(NfType::kAmf, nlohmann::json{{"subscriptionId", "AMF-SUB-000777"}, {"event", event}}.dump())
                .status,
            404);
  EXPECT_EQ(nwdaf.handle_notification(NfType::kSmf, nlohmann::json{{"subscriptionId", "AMF-SUB-000001"}, {"event", event}}.dump())
                .status,
            404);
  EXPECT_EQ(nwdaf.handle_notification(NfType::kAmf, "{").status, 400);
  const auto m = nwdaf.metrics();
  EXPECT_EQ(m.received, 1u);
  EXPECT_EQ(m.rejected, 2u);
  EXPECT_EQ(m.malformed, 1u);
  EXPECT_EQ(transport.send({sba::Method::kPost, "/nwdaf-notify/v1/upf", "{}"}, nwdaf.base_uri()).status, 404);
}

TEST_F(Deployment, FiltersBySupiAndKind) {
  Nwdaf nwdaf(transport, clock, nrf_uri);
  nwdaf.start(parse_subscription_config("subscriptions:\n  - {nf: amf, events: [HANDOVER], supis: [imsi-2]}\n"));
  for (const char* s : {"imsi-1", "imsi-2"}) {
    amf.register_ue(Supi{s}, {"C1", 1}, clock.now());
    amf.handover(Supi{s}, {"C2", 2}, clock.now());
  }
  const auto events = nwdaf.store().events();
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].supi.value, "imsi-2");
  EXPECT_EQ(events[0].kind, EventKind::kHandover);
}

TEST_F(Deployment, StartFailsWithoutProducer) {
  sba::InProcTransport lonely;
  sba::NrfRegistry empty;
  const auto uri = lonely.bind("nrf", empty.handler());
  Nwdaf nwdaf(lonely, clock, uri);
  EXPECT_THROW(nwdaf.start(subscribe_all_config()), std::runtime_error);
}

TEST(Analytics, SmallTraceByHand) {
  using namespace fixture;
  std::vector<NetworkEvent> ev{
      registration(0, "a", true),     location(0, "a", "C1"),      handover(1800, "a", "C1", "C2"),
      location(1800, "a", "C2"),      registration(4000, "a", false), registration(5000, "a", true),
      location(5000, "a", "C2"),      registration(3700, "b", true),  location(3700, "b", "C3"),
  };
  const auto r = compute_report(ev, 7200, 3600);
  EXPECT_EQ(r.active_ue_series, (std::vector<std::size_t>{1, 2}));
  const auto& a = r.state_durations.at(Supi{"a"});
  EXPECT_EQ(a.active_intervals, 2u);
  EXPECT_EQ(a.mean_active_s, (4000.0 + 2200.0) / 2);
  EXPECT_EQ(a.mean_inactive_s, 1000.0);
  EXPECT_FALSE(r.state_durations.at(Supi{"b"}).mean_inactive_s);
  EXPECT_EQ(r.handovers.total(), 1u);
  EXPECT_EQ(r.handovers.hourly[0], 1u);
  EXPECT_EQ(r.dwell_per_cell.at("C1").mean_s, 1800.0);
  EXPECT_EQ(r.dwell_per_cell.at("C2").visits, 2u);
  EXPECT_EQ(r.dwell_per_cell.at("C2").mean_s, (2200.0 + 2200.0) / 2);
  EXPECT_EQ(r.dwell_per_cell.at("C3").mean_s, 3500.0);
}

TEST(Analytics, EmptyLog) {
  const auto r = compute_report({}, 0, 3600);
  EXPECT_TRUE(r.active_ue_series.empty());
  EXPECT_TRUE(r.state_durations.empty());
  EXPECT_EQ(r.handovers.total(), 0u);
  EXPECT_EQ(default_horizon({}), 0.0);
}

TEST(Analytics, MatchesOracleOnRandomTraces) {
  const auto dir = temp_dir("oracle");
  std::mt19937_64 rng(17);
  for (int round = 0; round < 40; ++round) {
    const auto path = dir / ("trace" + std::to_string(round) + ".ndjson");
    std::vector<NetworkEvent> events;
    {
      EventStore store(path);
      double t = 0;
      for (int i = 0; i < 300; ++i) {
        t += static_cast<double>(rng() % 900);
        const std::string supi = "imsi-" + std::to_string(rng() % 4);
        const std::string c1 = "C" + std::to_string(rng() % 4), c2 = "C" + std::to_string(4 + rng() % 3);
        NetworkEvent e;
        switch (rng() % 4) {
          case 0: e = fixture::registration(t, supi, rng() % 2); break;
          case 1: e = fixture::location(t, supi, c1); break;
          case 2: e = fixture::handover(t, supi, c1, c2); break;
          default: e = fixture::make_event(EventKind::kReachability, t, supi, ReachabilityPayload{true});
        }
        events.push_back(e);
        store.append({e, "X", e.timestamp});
      }
      store.flush();
    }
    const double horizon = events.back().timestamp.offset_s + static_cast<double>(rng() % 5000);
    const auto expected = oracle::analytics_from_ndjson(path.string(), horizon, 3600);
    ASSERT_EQ(compute_report(events, horizon, 3600), expected) << "round " << round;
  }
}
