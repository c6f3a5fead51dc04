// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "adaptiflow/http.hpp"
#include "adaptiflow/teastore/services.hpp"
#include "adaptiflow/transport.hpp"
#include "adaptiflow/wire.hpp"

namespace adaptiflow {
namespace {

using json = nlohmann::json;
using teastore::make_service;

template <typename T>
T round_trip(const T& value)
{
    json j;
    to_json(j, value);
    T back{};
    from_json(json::parse(j.dump()), back);
    return back;
}

TEST(Wire, RoundTrips)
{
    MetricsSample s{"persistence", 42, {{"network_ok", false}, {"response_time_ms", 10000.0}, {"mode", std::string("x")}}};
    EXPECT_EQ(round_trip(s), s);

    ActionOutcome o{"webui", "auth:OpenCircuitBreaker", OutcomeStatus::queued, 5, "detail", "Trigger"};
    EXPECT_EQ(round_trip(o), o);

    Notification n{"DatabaseUnavailableEvent", "persistence", 20000, "00ff", {{"note", "restart"}}};
    EXPECT_EQ(round_trip(n), n);

    AdaptationState st = AdaptationState::initial_for(ServiceRole::recommender);
    st.power_mode = PowerMode::low;
    EXPECT_EQ(round_trip(st), st);

    TimelineEntry e{7, 85000, EntryKind::check, "MaliciousTrafficEvent", "true", "", "", {{0, true, 2, true}}};
    EXPECT_EQ(round_trip(e), e);

    Request r{12, "10.0.0.1", "/products"};
    EXPECT_EQ(round_trip(r), r);
    Response resp{ResponseClass::maintenance, "body", 1.5};
    EXPECT_EQ(round_trip(resp), resp);
}

TEST(Wire, NotificationFieldNames)
{
    json j;
    to_json(j, Notification{"E", "origin", 1, "abc", {}});
    EXPECT_EQ(j.at("event_name"), "E");
    EXPECT_EQ(j.at("origin_node"), "origin");
    EXPECT_EQ(j.at("evidence_digest"), "abc");
}

TEST(Wire, SampleDigestIsStable)
{
    MetricsSample a{"n", 1, {{"x", 1.0}}};
    MetricsSample b = a;
    EXPECT_EQ(sample_digest(a), sample_digest(b));
    EXPECT_EQ(sample_digest(a).size(), 16u);
    b.values["x"] = 2.0;
    EXPECT_NE(sample_digest(a), sample_digest(b));
}

TEST(Loopback, ServeAndResolve)
{
    VirtualClock clock;
    LoopbackTransport t;
    auto auth = make_service("auth", ServiceRole::auth, clock);
    EXPECT_EQ(t.serve(*auth), "loopback://auth");
    EXPECT_EQ(auth->transport(), &t);
    auto twin = make_service("auth", ServiceRole::auth, clock);
    EXPECT_THROW(t.serve(*twin), AddressInUse);

    auto o = t.invoke_action("loopback://auth", "OpenCircuitBreaker", 3, "T");
    EXPECT_EQ(o.status, OutcomeStatus::applied);
    EXPECT_EQ(o.trigger, "T");
    EXPECT_THROW(t.invoke_action("loopback://auth", "Nope", 3, ""), UnknownAction);
    EXPECT_THROW(t.invoke_action("loopback://ghost", "OpenCircuitBreaker", 3, ""), TargetUnreachable);
    EXPECT_FALSE(t.deliver("loopback://ghost", {"E", "x", 0, "", {}}).delivered);
}

TEST(Loopback, FailingActuatorComesBackAsOutcome)
{
    VirtualClock clock;
    LoopbackTransport t;
    auto auth = make_service("auth", ServiceRole::auth, clock);
    t.serve(*auth);
    auth->inject_action_failure("OpenCircuitBreaker", "stuck");
    auto o = t.invoke_action("loopback://auth", "OpenCircuitBreaker", 0, "");
    EXPECT_EQ(o.status, OutcomeStatus::failed);
    EXPECT_EQ(o.detail, "stuck");
}

TEST(Loopback, PartitionAndHeal)
{
    VirtualClock clock;
    LoopbackTransport t;
    auto auth = make_service("auth", ServiceRole::auth, clock);
    t.serve(*auth);
    t.partition("auth");
    EXPECT_FALSE(t.deliver("loopback://auth", {"E", "x", 0, "", {}}).delivered);
    std::vector<Request> batch{{0, "10.0.0.1", "/login"}};
    EXPECT_THROW(t.send_requests("loopback://auth", batch), TargetUnreachable);
    t.partition("auth", false);
    EXPECT_TRUE(t.deliver("loopback://auth", {"E", "x", 0, "", {}}).delivered);
    t.unserve("auth");
    EXPECT_FALSE(t.deliver("loopback://auth", {"E", "x", 0, "", {}}).delivered);
}

TEST(Loopback, PerSenderOrderIsPreserved)
{
    VirtualClock clock;
    LoopbackTransport t;
    auto webui = make_service("webui", ServiceRole::webui, clock);
    t.serve(*webui);
    for (int i = 0; i < 50; ++i) t.deliver("loopback://webui", {"E" + std::to_string(i), "p", i, "", {}});
    auto tl = webui->timeline();
    ASSERT_EQ(tl.size(), 50u);
    for (int i = 0; i < 50; ++i) EXPECT_EQ(tl[i].name, "E" + std::to_string(i));
}

struct Http : ::testing::Test {
    VirtualClock clock;
    std::unique_ptr<ServiceNode> persistence = make_service("persistence", ServiceRole::persistence, clock);
    std::unique_ptr<ServiceNode> webui = make_service("webui", ServiceRole::webui, clock);
    std::unique_ptr<NodeServer> ps;
    std::unique_ptr<NodeServer> ws;
    SocketTransport transport;

    void SetUp() override
    {
        ps = std::make_unique<NodeServer>(*persistence);
        ws = std::make_unique<NodeServer>(*webui);
        ps->start();
        ws->start();
        persistence->set_transport(&transport);
        webui->set_transport(&transport);
        persistence->set_address(ps->address());
        webui->set_address(ws->address());
        persistence->add_peer("webui", ws->address());
        webui->add_peer("persistence", ps->address());
    }

    httplib::Client client(const NodeServer& s) { return httplib::Client("127.0.0.1", s.port()); }
};

TEST_F(Http, InvokeOverSockets)
{
    auto o = transport.invoke_action(ws->address(), "EnableMaintenanceMode", 20000, "DatabaseUnavailableEvent");
    EXPECT_EQ(o.status, OutcomeStatus::applied);
    EXPECT_EQ(o.applied_at, 20000);
    EXPECT_EQ(webui->state().maintenance, true);
    EXPECT_THROW(transport.invoke_action(ws->address(), "Nope", 0, ""), UnknownAction);
}

TEST_F(Http, BroadcastOverSockets)
{
    webui->bind_notification({"DatabaseUnavailableEvent", {"EnableMaintenanceMode"}, std::nullopt, {}});
    persistence->apply_action("DatabaseUnavailableEventBroadcast", 20000);
    EXPECT_EQ(webui->state().maintenance, true);
    auto tl = webui->timeline();
    ASSERT_FALSE(tl.empty());
    EXPECT_EQ(tl.front().kind, EntryKind::notification);
    EXPECT_EQ(tl.front().value, "persistence");
}

TEST_F(Http, Endpoints)
{
    auto c = client(*ps);
    auto res = c.Get("/adaptiflow/actions");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    auto actions = json::parse(res->body).at("actions");
    EXPECT_EQ(actions.size(), 4u);

    res = c.Get("/adaptiflow/state");
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body).at("state").at("cache_enabled"), false);

    res = c.Get("/adaptiflow/events");
    ASSERT_TRUE(res);
    EXPECT_TRUE(json::parse(res->body).at("events").empty());

    res = c.Get("/adaptiflow/metrics/nope");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);

    res = c.Post("/adaptiflow/actions/EnableCache", R"({"at": 7, "trigger": "manual"})", "application/json");
    ASSERT_TRUE(res);
    auto o = json::parse(res->body);
    EXPECT_EQ(o.at("status"), "applied");
    EXPECT_EQ(o.at("applied_at"), 7);

    res = c.Post("/adaptiflow/events/notify", "not json", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
}

TEST_F(Http, FaultAndBusinessEndpoints)
{
    auto c = client(*ps);
    auto res = c.Get("/products");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);

    res = c.Post("/sim/fault", R"({"target": "database", "kind": "down"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_FALSE(persistence->sim().database->up());
    res = c.Get("/products");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 502);

    res = client(*ws).Post("/sim/fault", R"({"kind": "down"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
}

TEST_F(Http, SendRequestsBatch)
{
    std::vector<Request> batch{{1, "10.0.0.1", "/"}, {2, "10.0.0.2", "/"}};
    auto out = transport.send_requests(ws->address(), batch);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(webui->sim().traffic->snapshot(2).requests, 2u);
}

TEST_F(Http, AddressInUse)
{
    NodeServer clash(*webui, "127.0.0.1", ws->port());
    EXPECT_THROW(clash.start(), AddressInUse);
}

TEST_F(Http, UnreachableTarget)
{
    int port = ws->port();
    ws->stop();
    std::string dead = "127.0.0.1:" + std::to_string(port);
    EXPECT_THROW(transport.invoke_action(dead, "EnableMaintenanceMode", 0, ""), TargetUnreachable);
    EXPECT_FALSE(transport.deliver(dead, {"E", "x", 0, "", {}}).delivered);
    std::vector<Request> batch{{1, "10.0.0.1", "/"}};
    EXPECT_THROW(transport.send_requests(dead, batch), TargetUnreachable);
    EXPECT_THROW(persistence->apply_action("DatabaseAvailableEventBroadcast", 0), ActionFailed);
}

}  // namespace
}  // namespace adaptiflow
