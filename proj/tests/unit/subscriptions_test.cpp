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
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "adaptiflow/actions.hpp"
#include "adaptiflow/evaluators.hpp"
#include "adaptiflow/events.hpp"
#include "adaptiflow/node.hpp"
#include "support.hpp"

namespace adaptiflow {
namespace {

// Positions (0-based) at which count(n, consecutive) fires, by brute force:
// a position fires when the run of hits since the last reset (or the last
// miss, when consecutive) reaches n and nothing fired since the last reset.
// 'T' hit, 'F' miss, 'R' reset.
std::vector<int> scan_oracle(const std::string& ops, int n, bool consecutive)
{
    std::vector<int> out;
    int since = 0;  // index of the first op counted
    bool fired = false;
    for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
        if (ops[i] == 'R') {
            since = i + 1;
            fired = false;
            continue;
        }
        if (fired || ops[i] != 'T') continue;
        int hits = 0;
        for (int j = i; j >= since; --j) {
            if (ops[j] == 'T') ++hits;
            else if (consecutive) break;
        }
        if (hits >= n) {
            out.push_back(i);
            fired = true;
        }
    }
    return out;
}

std::vector<int> replay(const std::string& ops, int n, bool consecutive)
{
    std::vector<int> out;
    SubscriberState st;
    auto strategy = NotificationStrategy::count(n, consecutive);
    for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
        if (ops[i] == 'R') {
            st.reset();
            continue;
        }
        if (st.observe(ops[i] == 'T', strategy)) out.push_back(i);
    }
    return out;
}

TEST(SubscriberState, ThreeConsecutiveFiresOnSixth)
{
    EXPECT_EQ(replay("TTFTTT", 3, true), std::vector<int>{5});
}

TEST(SubscriberState, LatchedDoesNotRefire)
{
    EXPECT_EQ(replay("TTTT", 3, true), std::vector<int>{2});
}

TEST(SubscriberState, ResetRearms)
{
    EXPECT_EQ(replay("TTTRTTT", 3, true), (std::vector<int>{2, 6}));
}

TEST(SubscriberState, ImmediateFiresOnFirstHit)
{
    EXPECT_EQ(replay("FFT", 1, true), std::vector<int>{2});
}

TEST(SubscriberState, NonConsecutiveCountsOccurrences)
{
    EXPECT_EQ(replay("TFTFT", 3, false), std::vector<int>{4});
    EXPECT_EQ(replay("TFTFT", 3, true), std::vector<int>{});
}

TEST(SubscriberState, MissClearsStreakWhileLatched)
{
    SubscriberState st;
    auto s = NotificationStrategy::count(2);
    st.observe(true, s);
    st.observe(true, s);
    EXPECT_TRUE(st.fired);
    st.observe(false, s);
    EXPECT_EQ(st.consecutive_hits, 0);
}

TEST(SubscriberState, MatchesScanOracle)
{
    std::mt19937_64 rng(20240501);
    std::bernoulli_distribution coin(0.6);
    std::uniform_int_distribution<int> pick(0, 19);
    for (int n : {1, 2, 3, 5}) {
        for (bool consecutive : {true, false}) {
            for (int k = 0; k < 500; ++k) {
                std::string ops;
                for (int i = 0; i < 50; ++i) {
                    if (pick(rng) == 0) ops += 'R';
                    else ops += coin(rng) ? 'T' : 'F';
                }
                ASSERT_EQ(replay(ops, n, consecutive), scan_oracle(ops, n, consecutive))
                    << ops << " n=" << n << " consecutive=" << consecutive;
            }
        }
    }
}

TEST(Subscription, Validation)
{
    Subscription s{"E", {"A"}, nullptr, NotificationStrategy::immediate(), false, {}};
    EXPECT_NO_THROW(validate(s));
    auto bad = s;
    bad.strategy.threshold = 0;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = s;
    bad.actions.clear();
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = s;
    bad.event_name.clear();
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = s;
    bad.actions = {"peer:"};
    EXPECT_THROW(validate(bad), std::invalid_argument);
}

// Records every execution as "id@time/trigger".
class Recorder final : public AdaptationAction {
public:
    Recorder(std::string id, std::shared_ptr<std::vector<std::string>> log,
             ExecutionMode mode = ExecutionMode::sync)
        : AdaptationAction(id, ActionLevel::business, mode), log_(std::move(log)) {}

    ActionResult execute(ActionContext& ctx) override
    {
        log_->push_back(id() + "@" + std::to_string(ctx.now()) + "/" + ctx.trigger());
        return {};
    }

private:
    std::shared_ptr<std::vector<std::string>> log_;
};

struct NodeFixture : ::testing::Test {
    VirtualClock clock;
    ServiceNode node{"n", ServiceRole::custom, clock};
    std::shared_ptr<testing::ScriptedCollector::Values> x;
    std::shared_ptr<std::vector<std::string>> log = std::make_shared<std::vector<std::string>>();

    void SetUp() override
    {
        auto [c, v] = testing::scripted_x("x", 0.0);
        x = v;
        node.register_collector(std::move(c));
        node.register_action(std::make_unique<Recorder>("A", log));
        node.register_action(std::make_unique<Recorder>("B", log));
        node.register_event({"High", "x", std::make_shared<ThresholdEvaluator>("gt", "x", Comparison::greater_than, 10)});
        node.register_event({"Low", "x", std::make_shared<ThresholdEvaluator>("lt", "x", Comparison::less_than, 5)});
    }

    TickReport tick_at(TimestampMs t, double value)
    {
        x->set("x", value);
        clock.advance_to(t);
        return node.tick(t);
    }
};

TEST_F(NodeFixture, CountThreeConsecutiveAcrossTicks)
{
    node.subscribe({"High", {"A", "B"}, nullptr, NotificationStrategy::count(3), false, {}});
    std::vector<double> xs = {20, 20, 0, 20, 20, 20, 20};
    std::vector<std::size_t> fired_outcomes;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto r = tick_at(static_cast<TimestampMs>((i + 1) * 5000), xs[i]);
        fired_outcomes.push_back(r.checks.at(0).outcomes.size());
    }
    EXPECT_EQ(fired_outcomes, (std::vector<std::size_t>{0, 0, 0, 0, 0, 2, 0}));
    EXPECT_EQ(*log, (std::vector<std::string>{"A@30000/High", "B@30000/High"}));
}

TEST_F(NodeFixture, ResetsRearmThePairedEvent)
{
    node.subscribe({"High", {"A"}, nullptr, NotificationStrategy::immediate(), false, {"Low"}});
    node.subscribe({"Low", {"B"}, nullptr, NotificationStrategy::immediate(), true, {"High"}});
    tick_at(5000, 0);    // Low starts latched: nothing
    tick_at(10000, 20);  // A, re-arms Low
    tick_at(15000, 20);  // latched
    tick_at(20000, 0);   // B, re-arms High
    tick_at(25000, 0);   // latched
    tick_at(30000, 20);  // A again
    EXPECT_EQ(*log, (std::vector<std::string>{"A@10000/High", "B@20000/Low", "A@30000/High"}));
}

TEST_F(NodeFixture, FilterSeesAdaptationState)
{
    node.register_action(std::make_unique<StateAction>("Arm", "", [](AdaptationState& s) { s.ddos_armed = true; }));
    node.subscribe({"High", {"A"}, std::make_shared<FlagEvaluator>("armed", "state.ddos_armed"),
                    NotificationStrategy::count(2), false, {}});
    tick_at(5000, 20);
    tick_at(10000, 20);
    EXPECT_TRUE(log->empty());
    node.apply_action("Arm", 10000);
    tick_at(15000, 20);
    EXPECT_TRUE(log->empty());
    tick_at(20000, 20);
    EXPECT_EQ(*log, std::vector<std::string>{"A@20000/High"});
}

TEST_F(NodeFixture, NotifySubscribersBypassesEvaluator)
{
    node.subscribe({"High", {"A"}, nullptr, NotificationStrategy::immediate(), false, {}});
    auto outcomes = node.notify_subscribers("High", testing::sample_of({{"x", 0.0}}), 100);
    ASSERT_EQ(outcomes.size(), 1u);
    EXPECT_EQ(outcomes[0].trigger, "High");
    EXPECT_TRUE(node.notify_subscribers("High", {}, 200).empty());
    node.reset_subscriber("High");
    EXPECT_EQ(node.notify_subscribers("High", {}, 300).size(), 1u);
}

TEST_F(NodeFixture, SubscribeChecksReferences)
{
    EXPECT_THROW(node.subscribe({"Nope", {"A"}, nullptr, {}, false, {}}), UnknownEvent);
    EXPECT_THROW(node.subscribe({"High", {"Missing"}, nullptr, {}, false, {}}), UnknownAction);
    // Remote references are resolved when they run.
    EXPECT_NO_THROW(node.subscribe({"High", {"peer:Anything"}, nullptr, {}, false, {}}));
}

TEST_F(NodeFixture, UnreachableRemoteActionIsRecordedAsFailed)
{
    node.subscribe({"High", {"ghost:A"}, nullptr, {}, false, {}});
    auto r = tick_at(5000, 20);
    ASSERT_EQ(r.checks.at(0).outcomes.size(), 1u);
    EXPECT_EQ(r.checks[0].outcomes[0].status, OutcomeStatus::failed);
    EXPECT_EQ(r.checks[0].outcomes[0].action_id, "ghost:A");
}

TEST_F(NodeFixture, ReplaceSubscriptionDropsRunningCount)
{
    auto id = node.subscribe({"High", {"A"}, nullptr, NotificationStrategy::count(2), false, {}});
    tick_at(5000, 20);
    node.replace_subscription(id, {"High", {"B"}, nullptr, NotificationStrategy::count(2), false, {}});
    tick_at(10000, 20);
    EXPECT_TRUE(log->empty());
    tick_at(15000, 20);
    EXPECT_EQ(*log, std::vector<std::string>{"B@15000/High"});
    node.unsubscribe(id);
    EXPECT_TRUE(node.subscriptions().empty());
}

TEST_F(NodeFixture, CollectorFailureIsAnErrorCheck)
{
    node.subscribe({"High", {"A"}, nullptr, NotificationStrategy::immediate(), false, {}});
    x->fail = true;
    auto r = tick_at(5000, 20);
    EXPECT_FALSE(r.checks.at(0).error.empty());
    EXPECT_FALSE(r.checks.at(0).triggered);
    EXPECT_EQ(node.timeline().front().value, "error");
    x->fail = false;
    tick_at(10000, 20);
    EXPECT_EQ(*log, std::vector<std::string>{"A@10000/High"});
}

TEST_F(NodeFixture, CheckEventIsPure)
{
    node.subscribe({"High", {"A"}, nullptr, NotificationStrategy::immediate(), false, {}});
    x->set("x", 20.0);
    auto r = node.check_event("High", 0);
    EXPECT_TRUE(r.triggered);
    EXPECT_TRUE(log->empty());
    EXPECT_EQ(node.subscriptions().at(0).state, SubscriberState{});
    EXPECT_THROW(node.check_event("Nope", 0), UnknownEvent);
}

TEST_F(NodeFixture, ProgressRecordedOnChecks)
{
    node.subscribe({"High", {"A"}, nullptr, NotificationStrategy::count(2), false, {}});
    tick_at(5000, 20);
    tick_at(10000, 20);
    std::vector<SubscriptionProgress> seen;
    for (const auto& e : node.timeline()) {
        if (e.kind == EntryKind::check && e.name == "High") seen.push_back(e.progress.at(0));
    }
    ASSERT_EQ(seen.size(), 2u);
    EXPECT_EQ(seen[0], (SubscriptionProgress{0, true, 1, false}));
    EXPECT_EQ(seen[1], (SubscriptionProgress{0, true, 2, true}));
}

TEST_F(NodeFixture, DuplicateRegistrations)
{
    auto [c, v] = testing::scripted_x("x");
    EXPECT_THROW(node.register_collector(std::move(c)), DuplicateCollectorId);
    EXPECT_THROW(node.register_action(std::make_unique<Recorder>("A", log)), DuplicateActionId);
    EXPECT_THROW(node.register_event({"High", "x", std::make_shared<ConstantEvaluator>("c", true)}),
                 DuplicateEventName);
    EXPECT_THROW(node.register_event({"Other", "nope", std::make_shared<ConstantEvaluator>("c", true)}),
                 UnknownCollector);
}

TEST_F(NodeFixture, BoundRemoteEventAdvancesSubscription)
{
    node.bind_notification({"Remote", {}, std::nullopt, {}});
    node.subscribe({"Remote", {"A"}, nullptr, NotificationStrategy::count(2), false, {}});
    node.receive_notification({"Remote", "peer", 1, "", {}});
    EXPECT_TRUE(log->empty());
    node.receive_notification({"Remote", "peer", 2, "", {}});
    EXPECT_EQ(log->size(), 1u);
}

TEST_F(NodeFixture, PeerVerdictDoesNotCountAsLocalConfirmation)
{
    node.bind_notification({"High", {}, true, {}});
    node.subscribe({"High", {"A"}, nullptr, NotificationStrategy::count(2), false, {}});
    tick_at(5000, 20);
    node.receive_notification({"High", "peer", 5000, "", {}});
    EXPECT_TRUE(log->empty());
    tick_at(10000, 20);
    EXPECT_EQ(log->size(), 1u);
}

}  // namespace
}  // namespace adaptiflow
