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

#include <stdexcept>
#include <string>

#include "adaptiflow/observation.hpp"
#include "adaptiflow/timeline.hpp"

namespace adaptiflow {

std::string_view to_string(EntryKind kind)
{
    switch (kind) {
    case EntryKind::check: return "check";
    case EntryKind::action: return "action";
    case EntryKind::notification: return "notification";
    case EntryKind::delivery: return "delivery";
    case EntryKind::transition: return "transition";
    case EntryKind::note: return "note";
    }
    return "note";
}

EntryKind entry_kind_from_string(std::string_view s)
{
    for (auto k : {EntryKind::check, EntryKind::action, EntryKind::notification, EntryKind::delivery,
                   EntryKind::transition, EntryKind::note}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("unknown timeline entry kind: " + std::string(s));
}

std::string_view to_string(ObservationMode mode)
{
    return mode == ObservationMode::periodic ? "periodic" : "on_demand";
}

ObservationMode observation_mode_from_string(std::string_view s)
{
    if (s == "periodic") return ObservationMode::periodic;
    if (s == "on_demand") return ObservationMode::on_demand;
    throw std::invalid_argument("unknown observation mode: " + std::string(s));
}

std::size_t TickReport::outcome_count() const
{
    std::size_t n = deferred.size();
    for (const auto& c : checks) n += c.outcomes.size();
    return n;
}

}  // namespace adaptiflow
