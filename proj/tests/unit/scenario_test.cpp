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

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "adaptiflow/runner.hpp"
#include "adaptiflow/scenario.hpp"
#include "support.hpp"

namespace adaptiflow::scenario {
namespace {

using json = nlohmann::json;
using adaptiflow::testing::profile_path;
using adaptiflow::testing::scenario_path;

json read_json(const std::filesystem::path& p)
{
    std::ifstream in(p);
    return json::parse(in);
}

json minimal()
{
    return json::parse(R"({
      "name": "tiny",
      "horizon_s": 20,
      "profile": {"name": "flat", "points": [[0, 10]]},
      "nodes": [
        {"id": "webui", "role": "webui"},
        {"id": "persistence", "role": "persistence",
         "collectors": [{"id": "db", "type": "LocalDatabaseMetricsCollector"}],
         "evaluators": [{"id": "bad", "type": "UnHealthyDatabaseEvaluator"}],
         "events": [{"name": "Down", "collector": "db", "evaluator": "bad"}],
         "subscriptions": [{"event": "Down", "actions": ["EnableCache"]}]}
      ]
    })");
}

ScenarioSpec load(const json& j) { return load_scenario(j, adaptiflow::testing::source_dir() / "scenarios"); }

void expect_error(json j, const std::string& fragment)
{
    try {
        load(j);
        ADD_FAILURE() << "accepted: " << fragment;
    } catch (const ScenarioError& ex) {
        EXPECT_NE(std::string(ex.what()).find(fragment), std::string::npos) << ex.what();
    }
}

TEST(Loader, Minimal)
{
    auto spec = load(minimal());
    EXPECT_EQ(spec.name, "tiny");
    EXPECT_EQ(spec.interval_ms, 5000);
    ASSERT_EQ(spec.nodes.size(), 2u);
    EXPECT_EQ(spec.nodes[1].subscriptions.at(0).strategy, NotificationStrategy::immediate());
}

TEST(Loader, RejectsUnknownFields)
{
    auto j = minimal();
    j["colour"] = "blue";
    EXPECT_THROW(load(j), SchemaError);
    j = minimal();
    j["nodes"][0]["colour"] = "blue";
    EXPECT_THROW(load(j), SchemaError);
}

TEST(Loader, UnresolvedReferences)
{
    auto j = minimal();
    j["nodes"][1]["events"][0]["evaluator"] = "nope";
    EXPECT_THROW(load(j), UnresolvedReference);
    j = minimal();
    j["nodes"][1]["events"][0]["collector"] = "nope";
    EXPECT_THROW(load(j), UnresolvedReference);
    j = minimal();
    j["nodes"][1]["actions"] = json::array({"Explode"});
    EXPECT_THROW(load(j), UnresolvedReference);
    j = minimal();
    j["nodes"][1]["subscriptions"][0]["event"] = "Nope";
    EXPECT_THROW(load(j), UnresolvedReference);
    j = minimal();
    j["nodes"][1]["subscriptions"][0]["actions"] = json::array({"DisableMaintenanceMode"});
    EXPECT_THROW(load(j), UnresolvedReference);
    j = minimal();
    j["profile"] = "missing.csv";
    EXPECT_THROW(load(j), UnresolvedReference);
}

TEST(Loader, InvalidThresholds)
{
    auto j = minimal();
    j["nodes"][1]["subscriptions"][0]["strategy"] = {{"type", "count"}, {"n", 0}};
    EXPECT_THROW(load(j), InvalidThreshold);
    j = minimal();
    j["nodes"][1]["evaluators"][0]["params"] = {{"response_limit_ms", -1}};
    EXPECT_THROW(load(j), InvalidThreshold);
    j = minimal();
    j["nodes"][1]["evaluators"][0] = {{"id", "bad"}, {"type", "IncreaseResourceUsageEvaluator"}, {"params", {{"cpu_high", 120}}}};
    EXPECT_THROW(load(j), InvalidThreshold);
    j = minimal();
    j["interval_ms"] = 0;
    EXPECT_THROW(load(j), InvalidThreshold);
}

TEST(Loader, ErrorsNameThePath)
{
    auto j = minimal();
    j["nodes"][1]["events"][0]["evaluator"] = "nope";
    expect_error(j, "nodes[1].events[0].evaluator");
}

TEST(Loader, Assertions)
{
    auto j = minimal();
    j["assertions"] = json::array({{{"type", "action_within"}, {"node", "persistence"}, {"action", "EnableCache"}}});
    EXPECT_THROW(load(j), SchemaError);  // window missing
    j["assertions"] = json::array({{{"type", "telepathy"}, {"node", "persistence"}}});
    EXPECT_THROW(load(j), SchemaError);
    j["assertions"] = json::array({{{"type", "no_actions"}, {"node", "ghost"}}});
    EXPECT_THROW(load(j), UnresolvedReference);
}

TEST(Loader, ShippedDocuments)
{
    auto healing = load_scenario_file(scenario_path("self_healing"));
    EXPECT_EQ(healing.kind, ScenarioKind::self_healing);
    EXPECT_EQ(healing.faults.size(), 2u);

    auto protection = load_scenario_file(scenario_path("self_protection"));
    for (const auto& n : protection.nodes) {
        ASSERT_EQ(n.subscriptions.empty(), false) << n.id;
        const auto& s = n.subscriptions.front();
        EXPECT_EQ(s.event, "MaliciousTrafficEvent");
        EXPECT_EQ(s.strategy, NotificationStrategy::count(n.id == "webui" ? 3 : 2, true)) << n.id;
    }

    auto optimization = load_scenario_file(scenario_path("self_optimization"));
    const auto* image = optimization.find_node("image");
    ASSERT_TRUE(image);
    EXPECT_EQ(image->evaluators.at(0).params.at("cpu_high"), 85.0);
}

TEST(Loader, SchemaFileListsTheTopLevelFields)
{
    auto schema = read_json(adaptiflow::testing::source_dir() / "scenarios" / "scenario.schema.json");
    for (const auto& f : {"name", "nodes", "faults", "assertions", "profile"}) {
        EXPECT_TRUE(schema.at("properties").contains(f)) << f;
    }
}

class Shipped : public ::testing::TestWithParam<std::string> {};

TEST_P(Shipped, AssertionsHold)
{
    auto report = run_scenario(load_scenario_file(scenario_path(GetParam())));
    for (const auto& a : report.assertions) EXPECT_TRUE(a.passed) << a.description << ": " << a.detail;
    EXPECT_TRUE(report.passed());
}

TEST_P(Shipped, Deterministic)
{
    auto spec = load_scenario_file(scenario_path(GetParam()));
    EXPECT_EQ(report_document(run_scenario(spec)), report_document(run_scenario(spec)));
}

TEST_P(Shipped, ReportRoundTrips)
{
    auto report = run_scenario(load_scenario_file(scenario_path(GetParam())));
    auto doc = report_document(report);
    auto back = json::parse(doc).get<ScenarioReport>();
    EXPECT_EQ(report_document(back), doc);
    EXPECT_TRUE(diff_timelines(report, back).empty());
}

TEST_P(Shipped, SocketTransportGivesSameTransitions)
{
    auto spec = load_scenario_file(scenario_path(GetParam()));
    auto loop = run_scenario(spec);
    RunOptions o;
    o.transport = TransportKind::socket;
    auto sock = run_scenario(spec, o);
    EXPECT_EQ(sock.transport, "socket");
    ASSERT_EQ(loop.nodes.size(), sock.nodes.size());
    for (std::size_t i = 0; i < loop.nodes.size(); ++i) {
        EXPECT_EQ(loop.nodes[i].transitions(), sock.nodes[i].transitions()) << loop.nodes[i].id;
        EXPECT_EQ(loop.nodes[i].final_state, sock.nodes[i].final_state) << loop.nodes[i].id;
    }
    EXPECT_TRUE(sock.passed());
}

INSTANTIATE_TEST_SUITE_P(Scenarios, Shipped,
                         ::testing::Values("self_healing", "self_protection", "self_optimization"));

TEST(Runner, SeedChangesOnlyJitterSensitiveDetail)
{
    auto spec = load_scenario_file(scenario_path("self_protection"));
    RunOptions a, b;
    a.seed = 1;
    b.seed = 2;
    auto ra = run_scenario(spec, a);
    auto rb = run_scenario(spec, b);
    EXPECT_EQ(ra.seed, 1u);
    EXPECT_TRUE(diff_timelines(ra, rb).empty());
    EXPECT_TRUE(rb.passed());
}

TEST(Runner, NoFalsePositivesUnderModerateLoad)
{
    auto spec = load_scenario_file(scenario_path("self_protection"));
    RunOptions o;
    o.horizon_s = 300;
    o.profile = loadgen::LoadProfile::load(profile_path("increasingMedIntensity"));
    auto report = run_scenario(spec, o);
    for (const auto& n : report.nodes) {
        for (const auto& e : n.timeline) {
            EXPECT_NE(e.kind, EntryKind::action) << n.id << " " << e.name << " at " << e.at;
            for (const auto& p : e.progress) EXPECT_FALSE(p.fired && e.name == "MaliciousTrafficEvent");
        }
    }
}

TEST(Runner, IntervalOverride)
{
    auto spec = load_scenario_file(scenario_path("self_healing"));
    RunOptions o;
    o.interval_ms = 2000;
    o.horizon_s = 60;
    auto report = run_scenario(spec, o);
    EXPECT_EQ(report.interval_ms, 2000);
    const auto* p = report.node("persistence");
    ASSERT_TRUE(p);
    auto checks = std::count_if(p->timeline.begin(), p->timeline.end(), [](const TimelineEntry& e) {
        return e.kind == EntryKind::check && e.name == "DatabaseUnavailableEvent";
    });
    EXPECT_EQ(checks, 30);
}

TEST(Runner, HealthyVersusFaultedDiffIsTheAdaptation)
{
    auto faulted_spec = load_scenario_file(scenario_path("self_healing"));
    auto healthy_spec = faulted_spec;
    healthy_spec.faults.clear();
    auto healthy = run_scenario(healthy_spec);
    auto faulted = run_scenario(faulted_spec);

    std::size_t adaptations = 0;
    for (const auto& n : healthy.nodes) {
        adaptations += std::count_if(n.timeline.begin(), n.timeline.end(), is_adaptation);
    }
    EXPECT_EQ(adaptations, 0u);

    for (const auto& n : faulted.nodes) {
        adaptations += std::count_if(n.timeline.begin(), n.timeline.end(), is_adaptation);
    }
    auto d = diff_timelines(healthy, faulted);
    EXPECT_EQ(d.items.size(), adaptations);
    for (const auto& item : d.items) EXPECT_FALSE(item.in_a);
    EXPECT_TRUE(d.final_state.empty());  // everything reverted by the horizon
    EXPECT_TRUE(d.missing_nodes.empty());
}

TEST(Runner, DecentralizedOptimization)
{
    // The entry node is the load source; every other node can go.
    auto spec = load_scenario_file(scenario_path("self_optimization"));
    auto full = run_scenario(spec);
    for (const auto& gone : {"auth", "image", "persistence", "recommender"}) {
        RunOptions o;
        o.exclude_nodes = {gone};
        auto partial = run_scenario(spec, o);
        EXPECT_EQ(partial.node(gone), nullptr);
        EXPECT_EQ(partial.nodes.size(), full.nodes.size() - 1);
        for (const auto& n : partial.nodes) {
            const auto* ref = full.node(n.id);
            ASSERT_TRUE(ref);
            EXPECT_EQ(n.timeline, ref->timeline) << "without " << gone << ": " << n.id;
            EXPECT_EQ(n.final_state, ref->final_state) << "without " << gone << ": " << n.id;
        }
    }
}

TEST(Runner, LiveSmoke)
{
    auto spec = load_scenario_file(scenario_path("self_healing"));
    auto virtual_run = run_scenario(spec);
    RunOptions o;
    o.live = true;
    o.time_scale = 100.0;  // 120 s of scenario in about 1.2 s
    auto live = run_scenario(spec, o);
    EXPECT_TRUE(live.live);
    EXPECT_EQ(live.transport, "socket");
    for (const auto& n : live.nodes) {
        const auto* ref = virtual_run.node(n.id);
        ASSERT_TRUE(ref);
        EXPECT_EQ(n.transitions(), ref->transitions()) << n.id;
    }
}

TEST(Runner, TimelinePrinting)
{
    auto report = run_scenario(load_scenario_file(scenario_path("self_healing")));
    std::ostringstream out;
    print_timeline(out, report);
    auto text = out.str();
    EXPECT_NE(text.find("DatabaseUnavailableEventBroadcast"), std::string::npos);
    EXPECT_NE(text.find("PASS"), std::string::npos);
    EXPECT_EQ(text.find("FAIL"), std::string::npos);
}

}  // namespace
}  // namespace adaptiflow::scenario
