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

#include "adaptiflow/events.hpp"

#include <stdexcept>

namespace adaptiflow {

void validate(const Subscription& s)
{
    if (s.event_name.empty()) throw std::invalid_argument("subscription needs an event name");
    if (s.actions.empty()) throw std::invalid_argument("subscription on " + s.event_name + " has no actions");
    if (s.strategy.threshold < 1) {
        throw std::invalid_argument("notification threshold must be at least 1");
    }
    for (const auto& a : s.actions) {
        if (a.empty() || a.front() == ':' || a.back() == ':') {
            throw std::invalid_argument("malformed action reference '" + a + "'");
        }
    }
}

bool SubscriberState::observe(bool hit, const NotificationStrategy& strategy)
{
    if (fired) {
        // Latched: wait for a reset, but keep the streak honest.
        if (strategy.consecutive && !hit) consecutive_hits = 0;
        return false;
    }
    if (hit) {
        ++consecutive_hits;
        if (consecutive_hits >= strategy.threshold) {
            fired = true;
            return true;
        }
        return false;
    }
    if (strategy.consecutive) consecutive_hits = 0;
    return false;
}

}  // namespace adaptiflow
