#include <gtest/gtest.h>

#include <random>

#include "nwtb/domain/errors.hpp"
#include "nwtb/sba/dispatcher.hpp"
#include "nwtb/sba/inproc_transport.hpp"
#include "nwtb/sba/registry.hpp"
#include "nwtb/sba/tcp_transport.hpp"

using namespace nwtb;
using namespace nwtb::sba;

TEST(Url, EncodeDecodeRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = static_cast<int>(rng() % 20);
    for (int k = 0; k < n; ++k) s.push_back(static_cast<char>(rng() % 256));
    const auto enc = url_encode(s);
    for (char c : enc) {
      ASSERT_TRUE(std::isalnum(static_cast<unsigned char>(c)) || std::string_view("-._~%").find(c) != std::string_view::npos)
          << enc;
    }
    ASSERT_EQ(url_decode(enc), s);
  }
}

TEST(Url, SplitAndQuery) {
  const auto u = split_uri("http://127.0.0.1:8080/a/b?x=1");
  ASSERT_TRUE(u);
  EXPECT_EQ(u->base, "http://127.0.0.1:8080");
  EXPECT_EQ(u->path, "/a/b?x=1");
  EXPECT_FALSE(split_uri("no-scheme/path"));
  EXPECT_FALSE(split_uri("http:///path"));
  Request r{Method::kGet, "/p?a=x%20y&b=2", {}};
  EXPECT_EQ(r.path_only(), "/p");
  EXPECT_EQ(r.query().at("a"), "x y");
  EXPECT_EQ(r.query().at("b"), "2");
}

TEST(Message, GuardedHandlerMapsErrors) {
  const Request r{Method::kPost, "/x", "{}"};
  EXPECT_EQ(invoke_guarded([](const Request&) -> Response { throw ApiError(404, "gone"); }, r).status, 404);
  EXPECT_EQ(invoke_guarded([](const Request&) -> Response { throw std::runtime_error("boom"); }, r).status, 500);
  EXPECT_EQ(invoke_guarded([](const Request& q) { return Response::with_json(200, q.json()); }, r).body, "{}");
  EXPECT_THROW(Request({Method::kPost, "/x", "not json"}).json(), ApiError);
}

TEST(Registry, RegisterIsCreateThenReplace) {
  NrfRegistry nrf;
  NfProfile amf{"amf-1", NfType::kAmf, {{"namf-evts", "inproc://amf"}}};
  EXPECT_TRUE(nrf.register_nf(amf));
  amf.services[0].base_uri = "inproc://amf2";
  EXPECT_FALSE(nrf.register_nf(amf));
  EXPECT_EQ(nrf.size(), 1u);
  EXPECT_EQ(nrf.discover(NfType::kAmf, "namf-evts"), std::vector<std::string>{"inproc://amf2"});
  EXPECT_TRUE(nrf.discover(NfType::kSmf, "namf-evts").empty());
  EXPECT_THROW(nrf.register_nf({"", NfType::kAmf, {}}), ApiError);
  EXPECT_THROW(nrf.register_nf({"x", NfType::kAmf, {{"svc", "nonsense"}}}), ApiError);
}

TEST(Registry, HttpStatusCodes) {
  NrfRegistry nrf;
  InProcTransport t;
  const auto uri = t.bind("nrf", nrf.handler());
  NfProfile smf{"smf-1", NfType::kSmf, {{"nsmf-evts", "inproc://smf"}}};
  const auto path = "/nnrf-nfm/v1/nf-instances/smf-1";
  EXPECT_EQ(t.send(Request::with_json(Method::kPut, path, to_json(smf)), uri).status, 201);
  EXPECT_EQ(t.send(Request::with_json(Method::kPut, path, to_json(smf)), uri).status, 200);
  EXPECT_EQ(t.send(Request::with_json(Method::kPut, "/nnrf-nfm/v1/nf-instances/other", to_json(smf)), uri).status,
            400);
  EXPECT_EQ(t.send({Method::kPut, path, "{"}, uri).status, 400);
  EXPECT_EQ(t.send({Method::kGet, "/nnrf-disc/v1/nf-instances?target-nf-type=SMF", {}}, uri).status, 400);
  EXPECT_EQ(t.send({Method::kGet, "/nowhere", {}}, uri).status, 404);

  NrfClient client(t, uri);
  EXPECT_EQ(client.discover(NfType::kSmf, "nsmf-evts"), std::vector<std::string>{"inproc://smf"});
  const auto resp = t.send({Method::kGet, "/nnrf-disc/v1/nf-instances?target-nf-type=SMF&service-name=nsmf-evts", {}}, uri);
  const auto body = resp.json();
  ASSERT_EQ(body.at("instances").size(), 1u);
  EXPECT_EQ(body["instances"][0]["nfInstanceId"], "smf-1");
  EXPECT_EQ(body["instances"][0]["baseUri"], "inproc://smf");
}

TEST(InProc, DeliversAndReportsUnreachable) {
  InProcTransport t;
  const auto uri = t.bind("echo", [](const Request& r) { return Response{200, r.body}; });
  EXPECT_EQ(uri, "inproc://echo");
  EXPECT_EQ(t.send({Method::kPost, "/", "payload"}, uri).body, "payload");
  EXPECT_EQ(t.send_to_uri(Method::kPost, "inproc://echo/deep/path", "x").body, "x");
  t.unbind(uri);
  EXPECT_THROW(t.send({Method::kPost, "/", ""}, uri), TransportError);
  EXPECT_EQ(t.stats().requests, 3u);
  EXPECT_EQ(t.stats().transport_errors, 1u);
}

TEST(Tcp, RoundTripOverLoopback) {
  TcpTransport t;
  const auto uri = t.bind("echo", [](const Request& r) {
    return Response{r.method == Method::kDelete ? 204 : 200, r.path + "|" + r.body};
  });
  ASSERT_TRUE(uri.starts_with("http://127.0.0.1:"));
  const std::string body = R"({"k":"v é"})";
  EXPECT_EQ(t.send({Method::kPost, "/a?b=1", body}, uri).body, "/a?b=1|" + body);
  EXPECT_EQ(t.send({Method::kDelete, "/a", {}}, uri).status, 204);
  const auto err = t.bind("err", [](const Request&) -> Response { throw ApiError(409, "conflict"); });
  EXPECT_EQ(t.send({Method::kGet, "/", {}}, err).status, 409);
}

TEST(Tcp, UnreachableIsTransportError) {
  TcpTransport t;
  const auto uri = t.bind("gone", [](const Request&) { return Response::empty(204); });
  t.unbind(uri);
  EXPECT_THROW(t.send({Method::kPost, "/", "{}"}, uri), TransportError);
  EXPECT_THROW(t.send({Method::kPost, "/", "{}"}, "http://127.0.0.1:1"), TransportError);
}

namespace {

// Endpoint that fails the first `failures` attempts with `status`.
struct Flaky {
  int failures;
  int status;
  std::vector<std::string> seen;
  Response operator()(const Request& r) {
    seen.push_back(r.body);
    if (failures > 0) {
      --failures;
      return Response::empty(status);
    }
    return Response::empty(204);
  }
};

}  // namespace

TEST(Dispatcher, RetriesOnBackoffSchedule) {
  InProcTransport t;
  Flaky flaky{3, 503, {}};
  t.bind("nwdaf", [&](const Request& r) { return flaky(r); });
  NotificationDispatcher d(t);
  d.dispatch("inproc://nwdaf/notify", "n1", 5.0);
  EXPECT_EQ(flaky.seen.size(), 1u);
  d.poll(5.09);
  EXPECT_EQ(flaky.seen.size(), 1u);
  d.poll(5.1);
  EXPECT_EQ(flaky.seen.size(), 2u);
  d.poll(6.09);
  EXPECT_EQ(flaky.seen.size(), 2u);
  d.poll(6.1);
  EXPECT_EQ(flaky.seen.size(), 3u);
  d.poll(16.0);
  EXPECT_EQ(flaky.seen.size(), 3u);
  d.poll(16.1);
  EXPECT_EQ(flaky.seen.size(), 4u);
  const auto s = d.stats();
  EXPECT_EQ(s.posted, 1u);
  EXPECT_EQ(s.delivered, 1u);
  EXPECT_EQ(s.retries, 3u);
  EXPECT_EQ(s.dropped, 0u);
  EXPECT_EQ(d.pending(), 0u);
}

TEST(Dispatcher, DropsAfterLastRetry) {
  InProcTransport t;
  NotificationDispatcher d(t);
  d.dispatch("inproc://nobody/notify", "n1", 0.0);
  for (double now : {0.1, 1.1, 11.1}) d.poll(now);
  EXPECT_EQ(d.pending(), 0u);
  EXPECT_EQ(d.stats().retries, 3u);
  EXPECT_EQ(d.stats().dropped, 1u);
}

TEST(Dispatcher, ClientErrorsAreFinal) {
  InProcTransport t;
  Flaky flaky{1, 404, {}};
  t.bind("nwdaf", [&](const Request& r) { return flaky(r); });
  NotificationDispatcher d(t);
  d.dispatch("inproc://nwdaf/notify", "n1", 0.0);
  d.poll(100.0);
  EXPECT_EQ(flaky.seen.size(), 1u);
  EXPECT_EQ(d.stats().rejected, 1u);
  EXPECT_EQ(d.stats().retries, 0u);
}

TEST(Dispatcher, DueRetriesKeepOrder) {
  InProcTransport t;
  Flaky flaky{2, 500, {}};
  t.bind("nwdaf", [&](const Request& r) { return flaky(r); });
  NotificationDispatcher d(t);
  d.dispatch("inproc://nwdaf/n", "a", 0.0);
  d.dispatch("inproc://nwdaf/n", "b", 0.0);
  d.dispatch("inproc://nwdaf/n", "c", 0.0);
  d.poll(1.0);
  EXPECT_EQ(flaky.seen, (std::vector<std::string>{"a", "b", "c", "a", "b"}));
}
