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

#ifndef ADAPTIFLOW_OBSERVATION_HPP_
#define ADAPTIFLOW_OBSERVATION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "adaptiflow/actions.hpp"
#include "adaptiflow/metrics.hpp"

namespace adaptiflow {

enum class ObservationMode { periodic, on_demand };

std::string_view to_string(ObservationMode mode);
ObservationMode observation_mode_from_string(std::string_view s);

inline constexpr TimestampMs kDefaultIntervalMs = 5000;

struct ObservationConfig {
    TimestampMs interval_ms = kDefaultIntervalMs;
    ObservationMode mode = ObservationMode::periodic;
    /// Empty means every registered event, in registration order.
    std::vector<std::string> observed_events;
    /// Events checked on demand when a request handler sees a failure.
    std::vector<std::string> failure_triggers;
};

struct EventCheck {
    std::string event;
    bool triggered = false;
    MetricsSample sample;
    std::vector<ActionOutcome> outcomes;
    std::string error;
};

struct TickReport {
    std::string node;
    TimestampMs at = 0;
    bool on_demand = false;
    /// Deferred (async) applications executed at the start of this tick.
    std::vector<ActionOutcome> deferred;
    std::vector<EventCheck> checks;

    std::size_t outcome_count() const;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_OBSERVATION_HPP_
