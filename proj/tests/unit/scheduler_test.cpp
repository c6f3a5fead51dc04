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

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "adaptiflow/evaluators.hpp"
#include "adaptiflow/scheduler.hpp"
#include "adaptiflow/teastore/services.hpp"
#include "support.hpp"

namespace adaptiflow {
namespace {

std::unique_ptr<ServiceNode> plain(const std::string& id, const Clock& clock, TimestampMs interval,
                                   ObservationMode mode = ObservationMode::periodic)
{
    auto n = std::make_unique<ServiceNode>(id, ServiceRole::custom, clock);
    n->set_observation({interval, mode, {}, {}});
    return n;
}

TEST(Scheduler, TwelveTicksPerMinuteAtDefaultInterval)
{
    VirtualClock clock;
    auto n = plain("a", clock, kDefaultIntervalMs);
    ObservationScheduler s;
    s.add(*n);
    auto reports = s.run(clock, 60000);
    ASSERT_EQ(reports.size(), 12u);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        EXPECT_EQ(reports[i].at, static_cast<TimestampMs>((i + 1) * 5000));
    }
    EXPECT_EQ(clock.now(), 60000);
}

TEST(Scheduler, ThirtyTicksAtTwoSeconds)
{
    VirtualClock clock;
    auto n = plain("a", clock, 2000);
    ObservationScheduler s;
    s.add(*n);
    EXPECT_EQ(s.run(clock, 60000).size(), 30u);
}

TEST(Scheduler, SameInstantInNodeIdOrderAndHookFirst)
{
    VirtualClock clock;
    auto b = plain("b", clock, 5000);
    auto a = plain("a", clock, 5000);
    auto c = plain("c", clock, 10000);
    ObservationScheduler s;
    s.add(*b);
    s.add(*a);
    s.add(*c);
    std::vector<std::string> order;
    auto reports = s.run(clock, 10000, [&](TimestampMs t) { order.push_back("hook@" + std::to_string(t)); });
    for (const auto& r : reports) order.push_back(r.node + "@" + std::to_string(r.at));
    EXPECT_EQ(order, (std::vector<std::string>{"hook@5000", "hook@10000", "a@5000", "b@5000", "a@10000",
                                               "b@10000", "c@10000"}));
}

TEST(Scheduler, OnDemandNodesNeverTick)
{
    VirtualClock clock;
    auto n = plain("a", clock, 5000, ObservationMode::on_demand);
    ObservationScheduler s;
    s.add(*n);
    EXPECT_EQ(s.size(), 1u);
    EXPECT_FALSE(s.next_due());
    EXPECT_TRUE(s.run(clock, 60000).empty());
    EXPECT_THROW(s.tick(*n, 5000), std::logic_error);
}

TEST(Scheduler, RejectsSkippedOrEarlyTicks)
{
    VirtualClock clock;
    auto n = plain("a", clock, 5000);
    ObservationScheduler s;
    s.add(*n);
    EXPECT_THROW(s.tick(*n, 4000), std::logic_error);
    EXPECT_THROW(s.tick(*n, 10000), std::logic_error);
    EXPECT_NO_THROW(s.tick(*n, 5000));
    EXPECT_EQ(s.next_due(), 10000);
    EXPECT_THROW(s.add(*n), std::invalid_argument);
    s.remove("a");
    EXPECT_EQ(s.size(), 0u);
}

TEST(Scheduler, RejectsNonPositiveInterval)
{
    VirtualClock clock;
    EXPECT_THROW(plain("a", clock, 0), std::invalid_argument);
    EXPECT_NO_THROW(plain("b", clock, 0, ObservationMode::on_demand));
}

struct EnvGuard {
    EnvGuard() { ::unsetenv(kIntervalEnvVar); }
    ~EnvGuard() { ::unsetenv(kIntervalEnvVar); }
};

TEST(Scheduler, IntervalFromEnvironment)
{
    EnvGuard guard;
    EXPECT_EQ(interval_from_environment(), 5000);
    EXPECT_EQ(interval_from_environment(1234), 1234);
    ::setenv(kIntervalEnvVar, "2000", 1);
    EXPECT_EQ(interval_from_environment(), 2000);
    ::setenv(kIntervalEnvVar, "0", 1);
    EXPECT_THROW(interval_from_environment(), std::invalid_argument);
    ::setenv(kIntervalEnvVar, "5s", 1);
    EXPECT_THROW(interval_from_environment(), std::invalid_argument);
}

TEST(Scheduler, TickDrainsAsyncBeforeChecks)
{
    VirtualClock clock;
    auto node = teastore::make_service("webui", ServiceRole::webui, clock);
    node->register_action(std::make_unique<LoggingActuator>("Restart", "restart"));
    EXPECT_EQ(node->apply_action("Restart", 0).status, OutcomeStatus::queued);
    ObservationScheduler s;
    s.add(*node);
    auto reports = s.run(clock, 5000);
    ASSERT_EQ(reports.size(), 1u);
    ASSERT_EQ(reports[0].deferred.size(), 1u);
    EXPECT_EQ(reports[0].outcome_count(), 1u);
}

TEST(Scheduler, OnDemandTriggerChecksOneEvent)
{
    VirtualClock clock;
    ServiceNode node("n", ServiceRole::custom, clock);
    auto [c, v] = testing::scripted_x("x", 20.0);
    node.register_collector(std::move(c));
    node.register_event({"High", "x", std::make_shared<ThresholdEvaluator>("gt", "x", Comparison::greater_than, 10)});
    node.register_event({"Low", "x", std::make_shared<ThresholdEvaluator>("lt", "x", Comparison::less_than, 5)});
    auto r = node.trigger_on_demand("High", 123);
    EXPECT_TRUE(r.on_demand);
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_TRUE(r.checks[0].triggered);
    EXPECT_THROW(node.trigger_on_demand("Nope", 124), UnknownEvent);
}

TEST(Scheduler, LiveRunTicksOnTheWallClock)
{
    SystemClock clock(50.0);  // 1 wall ms = 50 logical ms
    auto a = plain("a", clock, 5000);
    auto b = plain("b", clock, 5000);
    ObservationScheduler s;
    s.add(*a);
    s.add(*b);
    auto started = std::chrono::steady_clock::now();
    auto reports = s.run_live(clock, 30000);
    auto wall = std::chrono::steady_clock::now() - started;
    ASSERT_EQ(reports.size(), 12u);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        EXPECT_EQ(reports[i].at, static_cast<TimestampMs>((i / 2 + 1) * 5000));
        EXPECT_EQ(reports[i].node, i % 2 ? "b" : "a");
    }
    EXPECT_GE(wall, std::chrono::milliseconds(550));
    EXPECT_LT(wall, std::chrono::seconds(10));
}

TEST(Clocks, VirtualNeverGoesBack)
{
    VirtualClock c(10);
    c.advance_by(5);
    EXPECT_EQ(c.now(), 15);
    EXPECT_THROW(c.advance_to(14), std::invalid_argument);
    EXPECT_THROW(SystemClock(0.0), std::invalid_argument);
}

}  // namespace
}  // namespace adaptiflow
