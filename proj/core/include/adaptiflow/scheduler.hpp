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

#ifndef ADAPTIFLOW_SCHEDULER_HPP_
#define ADAPTIFLOW_SCHEDULER_HPP_

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adaptiflow/clock.hpp"
#include "adaptiflow/node.hpp"

namespace adaptiflow {

inline constexpr const char* kIntervalEnvVar = "EVENT_LISTENING_INTERVAL_MS";

/// Interval from EVENT_LISTENING_INTERVAL_MS, or `fallback` when unset.
/// Throws std::invalid_argument for a set but non-positive or non-numeric
/// value.
TimestampMs interval_from_environment(TimestampMs fallback = kDefaultIntervalMs);

/// Periodic observation across nodes. Each periodic node ticks at exactly
/// start + k * interval_ms (k >= 1). Nodes due at the same timestamp tick
/// in node-id order.
class ObservationScheduler {
public:
    using Hook = std::function<void(TimestampMs)>;

    explicit ObservationScheduler(TimestampMs start = 0) : start_(start) {}

    /// Nodes in on-demand mode are accepted and never ticked.
    void add(ServiceNode& node);
    void remove(const std::string& node_id);
    std::size_t size() const { return nodes_.size(); }

    /// Ticks `node` after checking `now` is exactly its next due time.
    /// Throws std::logic_error on a skipped or early tick.
    TickReport tick(ServiceNode& node, TimestampMs now);

    std::optional<TimestampMs> next_due() const;

    /// Virtual-clock loop: advances `clock` to each due time up to `until`
    /// inclusive, calls `before_ticks(t)` once per due time, then ticks.
    std::vector<TickReport> run(VirtualClock& clock, TimestampMs until, const Hook& before_ticks = {});

    /// Real-clock loop, one thread per node, until the clock passes `until`
    /// or `stop` is set. Reports are returned sorted by (time, node id).
    std::vector<TickReport> run_live(const SystemClock& clock, TimestampMs until,
                                     const std::atomic<bool>* stop = nullptr);

private:
    struct Slot {
        ServiceNode* node;
        TimestampMs interval;
        TimestampMs next_due;
    };

    TimestampMs start_;
    std::map<std::string, Slot> nodes_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_SCHEDULER_HPP_
