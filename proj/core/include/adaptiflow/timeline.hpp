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

#ifndef ADAPTIFLOW_TIMELINE_HPP_
#define ADAPTIFLOW_TIMELINE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adaptiflow/clock.hpp"

namespace adaptiflow {

enum class EntryKind {
    check,         ///< event evaluated: name=event, value=verdict
    action,        ///< outcome: name=action, value=status, trigger, detail
    notification,  ///< inbound: name=event, value=origin
    delivery,      ///< outbound: name=event, value=target, detail=delivered|failed: why
    transition,    ///< flag change: name=flag, value=new, detail=old
    note,          ///< free text in detail
};

std::string_view to_string(EntryKind kind);
EntryKind entry_kind_from_string(std::string_view s);

/// Per-subscription bookkeeping captured by a check entry.
struct SubscriptionProgress {
    std::size_t subscription = 0;  ///< index in the node's registration order
    bool counted = false;
    int consecutive_hits = 0;
    bool fired = false;  ///< fired on this very check

    bool operator==(const SubscriptionProgress&) const = default;
};

struct TimelineEntry {
    std::uint64_t seq = 0;
    TimestampMs at = 0;
    EntryKind kind = EntryKind::note;
    std::string name;
    std::string value;
    std::string detail;
    std::string trigger;
    std::vector<SubscriptionProgress> progress;

    bool operator==(const TimelineEntry&) const = default;
};

/// Checks are observations; everything else records an adaptation.
inline bool is_adaptation(const TimelineEntry& e) { return e.kind != EntryKind::check; }

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_TIMELINE_HPP_
