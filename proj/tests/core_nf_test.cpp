#include <gtest/gtest.h>

#include <random>

#include "nwtb/domain/errors.hpp"
#include "nwtb/domain/event_json.hpp"
#include "nwtb/nf/amf.hpp"
#include "nwtb/nf/smf.hpp"
#include "nwtb/sba/inproc_transport.hpp"

using namespace nwtb;
using namespace nwtb::nf;

namespace {

struct Core : ::testing::Test {
  sba::InProcTransport transport;
  Amf amf{transport};
  Smf smf{transport};
  std::vector<nlohmann::json> received;
  SimInstant t0{1740960000, 0.0};

  void SetUp() override {
    amf.bind();
    smf.bind();
    amf.connect_smf(smf.base_uri());
    transport.bind("sink", [this](const sba::Request& r) {
      received.push_back(r.json());
      return sba::Response::empty(204);
    });
  }

  SimInstant at(double s) const { return {t0.start_epoch_s, s}; }

  static std::vector<EventKind> kinds(const std::vector<NetworkEvent>& events) {
    std::vector<EventKind> out;
    for (const auto& e : events) out.push_back(e.kind);
    return out;
  }

  sba::Response subscribe(const std::string& service, const nlohmann::json& body) {
    const auto& base = service == "namf-evts" ? amf.base_uri() : smf.base_uri();
    return transport.send(sba::Request::with_json(sba::Method::kPost, "/" + service + "/v1/subscriptions", body),
                          base);
  }
};

const Supi kUe{"imsi-001010000000001"};
const CellId kC1{"C1", 1};
const CellId kC2{"C2", 2};
const CellId kC3{"C3", 3};

}  // namespace

TEST_F(Core, SubscriptionLifecycle) {
  const auto r = subscribe("namf-evts", {{"subscriber", "nwdaf-1"},
                                         {"notifyUri", "inproc://sink/amf"},
                                         {"eventKinds", {"REGISTRATION_STATE", "HANDOVER"}}});
  ASSERT_EQ(r.status, 201);
  const auto id = r.json().at("subscriptionId").get<std::string>();
  EXPECT_EQ(id, "AMF-SUB-000001");

  amf.register_ue(kUe, kC1, at(1));
  amf.handover(kUe, kC2, at(2));
  ASSERT_EQ(received.size(), 2u);
  EXPECT_EQ(received[0]["subscriptionId"], id);
  EXPECT_EQ(received[0]["event"]["kind"], "REGISTRATION_STATE");
  EXPECT_EQ(received[1]["event"]["kind"], "HANDOVER");
  EXPECT_EQ(event_from_json(received[1]["event"]).timestamp, at(2));

  const std::string path = "/namf-evts/v1/subscriptions/" + id;
  EXPECT_EQ(transport.send({sba::Method::kDelete, path, {}}, amf.base_uri()).status, 204);
  EXPECT_EQ(transport.send({sba::Method::kDelete, path, {}}, amf.base_uri()).status, 404);
  amf.handover(kUe, kC1, at(3));
  EXPECT_EQ(received.size(), 2u);
}

TEST_F(Core, SubscriptionIdsAreSequentialPerNf) {
  const nlohmann::json amf_body = {{"subscriber", "nwdaf-1"}, {"notifyUri", "inproc://sink/a"}, {"eventKinds", {"HANDOVER"}}};
  const nlohmann::json smf_body = {{"subscriber", "nwdaf-1"}, {"notifyUri", "inproc://sink/s"}, {"eventKinds", {"QOS_CHANGE"}}};
  EXPECT_EQ(subscribe("namf-evts", amf_body).json()["subscriptionId"], "AMF-SUB-000001");
  EXPECT_EQ(subscribe("namf-evts", amf_body).json()["subscriptionId"], "AMF-SUB-000002");
  EXPECT_EQ(subscribe("nsmf-evts", smf_body).json()["subscriptionId"], "SMF-SUB-000001");
}

TEST_F(Core, SubscriptionValidation) {
  const auto body = [](nlohmann::json kinds) {
    return nlohmann::json{{"subscriber", "nwdaf-1"}, {"notifyUri", "inproc://sink/a"}, {"eventKinds", kinds}};
  };
  EXPECT_EQ(subscribe("namf-evts", body({"QOS_CHANGE"})).status, 400);
  EXPECT_EQ(subscribe("nsmf-evts", body({"HANDOVER"})).status, 400);
  EXPECT_EQ(subscribe("namf-evts", body(nlohmann::json::array())).status, 400);
  EXPECT_EQ(subscribe("namf-evts", body({"BOGUS"})).status, 400);
  auto no_subscriber = body({"HANDOVER"});
  no_subscriber.erase("subscriber");
  EXPECT_EQ(subscribe("namf-evts", no_subscriber).status, 400);
  auto no_kinds = body({"HANDOVER"});
  no_kinds.erase("eventKinds");
  EXPECT_EQ(subscribe("namf-evts", no_kinds).status, 400);
  auto bad_uri = body({"HANDOVER"});
  bad_uri["notifyUri"] = "not a uri";
  EXPECT_EQ(subscribe("namf-evts", bad_uri).status, 400);
  EXPECT_EQ(transport.send({sba::Method::kDelete, "/namf-evts/v1/subscriptions/AMF-SUB-999999", {}}, amf.base_uri())
                .status,
            404);
  EXPECT_TRUE(amf.exposure().subscriptions().empty());
}

TEST_F(Core, SupiFilterRestrictsNotifications) {
  subscribe("namf-evts", {{"subscriber", "nwdaf-1"}, {"notifyUri", "inproc://sink/a"},
                          {"eventKinds", {"REGISTRATION_STATE"}},
                          {"supiFilter", {kUe.value}}});
  amf.register_ue(Supi{"imsi-other"}, kC1, at(1));
  amf.register_ue(kUe, kC1, at(1));
  ASSERT_EQ(received.size(), 1u);
  EXPECT_EQ(received[0]["event"]["supi"], kUe.value);
}

TEST_F(Core, OneNotificationPerMatchingSubscription) {
  for (int i = 0; i < 3; ++i) {
    subscribe("namf-evts", {{"subscriber", "nwdaf-1"}, {"notifyUri", "inproc://sink/a"}, {"eventKinds", {"LOCATION_REPORT"}}});
  }
  amf.register_ue(kUe, kC1, at(1));
  EXPECT_EQ(received.size(), 3u);
  EXPECT_EQ(amf.exposure().dispatched(), 3u);
}

TEST_F(Core, RegistrationSequence) {
  const auto events = amf.register_ue(kUe, kC1, at(5));
  EXPECT_EQ(kinds(events), (std::vector{EventKind::kRegistrationState, EventKind::kConnectivityState,
                                        EventKind::kLocationReport}));
  const auto ctx = amf.context(kUe);
  ASSERT_TRUE(ctx);
  EXPECT_EQ(ctx->rm_state, RmState::kRegistered);
  EXPECT_EQ(ctx->cm_state, CmState::kConnected);
  EXPECT_EQ(ctx->serving_cell, kC1);
  EXPECT_TRUE(smf.is_registered(kUe));
  EXPECT_THROW(amf.register_ue(kUe, kC2, at(6)), ProcedureError);
  EXPECT_EQ(amf.exposure().log().size(), 3u);
}

TEST_F(Core, HandoverSequenceAndHistory) {
  amf.register_ue(kUe, kC1, at(0));
  smf.establish(kUe, "internet", kC1, at(0));
  const auto events = amf.handover(kUe, kC2, at(10));
  EXPECT_EQ(kinds(events),
            (std::vector{EventKind::kHandover, EventKind::kLocationReport, EventKind::kUpPathChange}));
  const auto* h = events[0].as<HandoverPayload>();
  EXPECT_EQ(h->source, kC1);
  EXPECT_EQ(h->target, kC2);
  EXPECT_THROW(amf.handover(kUe, kC2, at(11)), ProcedureError);
  amf.handover(kUe, kC3, at(12));
  EXPECT_EQ(amf.context(kUe)->last_two_cells, (std::vector{kC2, kC1}));
  amf.handover(kUe, kC1, at(13));
  EXPECT_EQ(amf.context(kUe)->last_two_cells, (std::vector{kC3, kC2}));
}

TEST_F(Core, DeregistrationReleasesSessions) {
  amf.register_ue(kUe, kC1, at(0));
  const auto [sid, est] = smf.establish(kUe, "internet", kC1, at(0));
  EXPECT_EQ(est.kind, EventKind::kPduSessionEstablishment);
  smf.traffic_tick(sid, 10, 20, at(60));
  const auto events = amf.deregister_ue(kUe, at(100));
  EXPECT_EQ(kinds(events), (std::vector{EventKind::kConnectivityState, EventKind::kRegistrationState,
                                        EventKind::kPduSessionRelease}));
  const auto* rel = events[2].as<PduSessionPayload>();
  EXPECT_EQ(rel->bytes_up, 10u);
  EXPECT_EQ(rel->bytes_down, 20u);
  EXPECT_FALSE(smf.is_registered(kUe));
  EXPECT_TRUE(smf.active_sessions(kUe).empty());
  EXPECT_THROW(amf.deregister_ue(kUe, at(101)), ProcedureError);
  EXPECT_THROW(amf.handover(kUe, kC2, at(101)), ProcedureError);
}

TEST_F(Core, SessionPreconditions) {
  EXPECT_THROW(smf.establish(kUe, "internet", kC1, at(0)), ProcedureError);
  amf.register_ue(kUe, kC1, at(0));
  const auto [sid, _] = smf.establish(kUe, "internet", kC1, at(0));
  EXPECT_EQ(sid, "PDU-000001");
  smf.release(sid, at(1));
  EXPECT_THROW(smf.release(sid, at(2)), ProcedureError);
  EXPECT_THROW(smf.traffic_tick(sid, 1, 1, at(2)), ProcedureError);
  EXPECT_THROW(smf.qos_change(sid, 5, at(2)), ProcedureError);
  EXPECT_THROW(smf.release("PDU-424242", at(2)), ProcedureError);
}

TEST_F(Core, QosChangeReportsBeforeAndAfter) {
  amf.register_ue(kUe, kC1, at(0));
  const auto [sid, _] = smf.establish(kUe, "internet", kC1, at(0));
  const auto e = smf.qos_change(sid, 5, at(1));
  EXPECT_EQ(*e.as<QosChangePayload>(), (QosChangePayload{sid, 9, 5}));
  EXPECT_EQ(smf.qos_change(sid, 7, at(2)).as<QosChangePayload>()->five_qi_before, 5);
}

TEST_F(Core, RadioLossAndRestore) {
  amf.register_ue(kUe, kC1, at(0));
  EXPECT_EQ(kinds(amf.radio_loss(kUe, at(1))),
            (std::vector{EventKind::kConnectivityState, EventKind::kReachability}));
  EXPECT_FALSE(amf.context(kUe)->reachable);
  EXPECT_EQ(amf.context(kUe)->cm_state, CmState::kIdle);
  EXPECT_THROW(amf.radio_loss(kUe, at(2)), ProcedureError);
  EXPECT_EQ(kinds(amf.radio_restore(kUe, kC1, at(3))),
            (std::vector{EventKind::kConnectivityState, EventKind::kReachability}));
  EXPECT_THROW(amf.radio_restore(kUe, kC1, at(4)), ProcedureError);
  amf.radio_loss(kUe, at(5));
  EXPECT_EQ(kinds(amf.radio_restore(kUe, kC2, at(6))),
            (std::vector{EventKind::kConnectivityState, EventKind::kReachability, EventKind::kHandover,
                         EventKind::kLocationReport}));
  EXPECT_EQ(amf.context(kUe)->serving_cell, kC2);
}

TEST_F(Core, PresenceInAreaOfInterest) {
  amf.set_areas_of_interest({{"aoi", 0, 0, 10, 10}});
  EXPECT_TRUE(amf.update_position(kUe, {5, 5}, at(0)).empty());
  amf.register_ue(kUe, kC1, at(0));
  auto in = amf.update_position(kUe, {5, 5}, at(1));
  ASSERT_EQ(in.size(), 1u);
  EXPECT_EQ(*in[0].as<PresenceInAoiPayload>(), (PresenceInAoiPayload{"aoi", true}));
  EXPECT_TRUE(amf.update_position(kUe, {6, 6}, at(2)).empty());
  auto out = amf.update_position(kUe, {50, 5}, at(3));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_FALSE(out[0].as<PresenceInAoiPayload>()->inside);
  EXPECT_TRUE(amf.update_position(kUe, {60, 5}, at(4)).empty());
}

TEST_F(Core, RandomProceduresKeepInvariants) {
  std::mt19937_64 rng(11);
  const std::vector<CellId> cells{kC1, kC2, kC3};
  const std::vector<Supi> ues{Supi{"imsi-1"}, Supi{"imsi-2"}, Supi{"imsi-3"}};
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> sent;
  std::uint64_t reported_up = 0, reported_down = 0;
  for (int step = 0; step < 5000; ++step) {
    const auto& supi = ues[rng() % ues.size()];
    const auto& cell = cells[rng() % cells.size()];
    const SimInstant now = at(step);
    std::vector<NetworkEvent> events;
    try {
      switch (rng() % 8) {
        case 0: events = amf.register_ue(supi, cell, now); break;
        case 1: events = amf.deregister_ue(supi, now); break;
        case 2: events = amf.handover(supi, cell, now); break;
        case 3: events = amf.radio_loss(supi, now); break;
        case 4: events = amf.radio_restore(supi, cell, now); break;
        case 5: events.push_back(smf.establish(supi, "internet", cell, now).second); break;
        case 6: {
          const auto active = smf.active_sessions(supi);
          if (active.empty()) break;
          const auto up = rng() % 1000, down = rng() % 1000;
          events.push_back(smf.traffic_tick(active.front(), up, down, now));
          sent[active.front()].first += up;
          sent[active.front()].second += down;
          break;
        }
        default: {
          const auto active = smf.active_sessions(supi);
          if (!active.empty()) events.push_back(smf.release(active.back(), now));
        }
      }
    } catch (const ProcedureError&) {
      ASSERT_TRUE(events.empty());
    }
    for (const auto& e : events) {
      ASSERT_TRUE(validate_event(e).empty());
      if (const auto* rel = e.as<PduSessionPayload>(); rel && e.kind == EventKind::kPduSessionRelease) {
        // Release totals equal the sum of the traffic deltas.
        ASSERT_EQ(rel->bytes_up, sent[rel->session_id].first);
        ASSERT_EQ(rel->bytes_down, sent[rel->session_id].second);
        reported_up += rel->bytes_up;
        reported_down += rel->bytes_down;
      }
    }
    for (const auto& ctx : amf.contexts()) {
      ASSERT_TRUE(ctx.invariants_hold());
      ASSERT_EQ(smf.is_registered(ctx.supi), ctx.rm_state == RmState::kRegistered);
      if (ctx.rm_state == RmState::kDeregistered) {
        ASSERT_TRUE(smf.active_sessions(ctx.supi).empty());
      }
    }
  }
  EXPECT_GT(reported_up, 0u);
  EXPECT_GT(reported_down, 0u);
}
