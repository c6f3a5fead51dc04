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

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "adaptiflow/actions.hpp"
#include "adaptiflow/evaluators.hpp"
#include "adaptiflow/events.hpp"
#include "adaptiflow/loadgen.hpp"
#include "adaptiflow/node.hpp"

namespace {

using namespace adaptiflow;

MetricsSample usage(double cpu, double mem)
{
    return MetricsSample{"bench", 0, {{"cpu_usage", cpu}, {"memory_usage", mem}}};
}

void BM_IncreaseEvaluator(benchmark::State& state)
{
    IncreaseResourceUsageEvaluator up;
    auto s = usage(70.0, 81.0);
    for (auto _ : state) benchmark::DoNotOptimize(up.evaluate(s));
}
BENCHMARK(BM_IncreaseEvaluator);

void BM_ThresholdEvaluator(benchmark::State& state)
{
    ThresholdEvaluator gt("gt", "request_rate", Comparison::greater_than, 300.0);
    MetricsSample s{"bench", 0, {{"request_rate", 301.5}}};
    for (auto _ : state) benchmark::DoNotOptimize(gt.evaluate(s));
}
BENCHMARK(BM_ThresholdEvaluator);

void BM_CountStrategy(benchmark::State& state)
{
    std::mt19937 rng(1);
    std::vector<bool> verdicts(4096);
    for (auto&& v : verdicts) v = rng() % 3 != 0;
    auto strategy = NotificationStrategy::count(static_cast<int>(state.range(0)));
    SubscriberState st;
    std::size_t i = 0;
    for (auto _ : state) {
        if (st.observe(verdicts[i++ & 4095], strategy)) st.reset();
    }
}
BENCHMARK(BM_CountStrategy)->Arg(1)->Arg(3)->Arg(5);

class ConstantCollector final : public MetricsCollector {
public:
    ConstantCollector()
        : MetricsCollector("usage", {{"cpu_usage", MetricKind::numeric, "%", ""},
                                     {"memory_usage", MetricKind::numeric, "%", ""}}) {}

protected:
    std::map<std::string, MetricValue> read(TimestampMs) override
    {
        return {{"cpu_usage", 50.0}, {"memory_usage", 40.0}};
    }
};

// One periodic tick with `range(0)` events, none of which fire.
void BM_NodeTick(benchmark::State& state)
{
    VirtualClock clock;
    ServiceNode node("bench", ServiceRole::custom, clock);
    node.register_collector(std::make_unique<ConstantCollector>());
    node.register_action(std::make_unique<LoggingActuator>("Log", "noop", ExecutionMode::sync));
    for (int i = 0; i < state.range(0); ++i) {
        auto name = "E" + std::to_string(i);
        node.register_event({name, "usage", std::make_shared<IncreaseResourceUsageEvaluator>()});
        node.subscribe({name, {"Log"}, nullptr, NotificationStrategy::count(3), false, {}});
    }
    TimestampMs t = 0;
    for (auto _ : state) {
        t += 5000;
        clock.advance_to(t);
        benchmark::DoNotOptimize(node.tick(t));
    }
}
BENCHMARK(BM_NodeTick)->Arg(1)->Arg(4)->Arg(16);

void BM_Schedule(benchmark::State& state)
{
    auto profile = loadgen::LoadProfile("ramp", {{0, 10}, {300, 300}});
    for (auto _ : state) benchmark::DoNotOptimize(loadgen::schedule(profile, 300, 7));
}
BENCHMARK(BM_Schedule)->Unit(benchmark::kMillisecond);

}  // namespace
