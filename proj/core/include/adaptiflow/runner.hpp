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

#ifndef ADAPTIFLOW_RUNNER_HPP_
#define ADAPTIFLOW_RUNNER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adaptiflow/scenario.hpp"
#include "adaptiflow/state.hpp"
#include "adaptiflow/timeline.hpp"

namespace adaptiflow::scenario {

enum class TransportKind { loopback, socket };

std::string_view to_string(TransportKind kind);

struct RunOptions {
    std::optional<double> horizon_s;
    std::optional<std::uint64_t> seed;
    std::optional<TimestampMs> interval_ms;
    std::optional<loadgen::LoadProfile> profile;
    TransportKind transport = TransportKind::loopback;
    /// Real-clock run; forces the socket transport.
    bool live = false;
    /// Logical milliseconds per wall millisecond in live mode.
    double time_scale = 1.0;
    /// Nodes left out of the mesh.
    std::vector<std::string> exclude_nodes;
};

struct NodeReport {
    std::string id;
    AdaptationState final_state;
    std::vector<TimelineEntry> timeline;

    /// Flag transitions in timeline order.
    std::vector<FlagChange> transitions() const;
};

struct AssertionResult {
    std::string description;
    bool passed = false;
    std::string detail;
};

struct ScenarioReport {
    std::string scenario;
    std::uint64_t seed = 0;
    double horizon_s = 0.0;
    TimestampMs interval_ms = 0;
    std::string transport;
    bool live = false;
    std::string profile;
    std::map<std::string, std::uint64_t> requests;  ///< by response class, plus "total"
    std::vector<NodeReport> nodes;                   ///< node-id order
    std::vector<AssertionResult> assertions;

    bool passed() const;
    const NodeReport* node(const std::string& id) const;
};

/// Builds the mesh, replays faults and load on the virtual (or real) clock
/// up to the horizon and evaluates the embedded assertions.
ScenarioReport run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

AssertionResult evaluate_assertion(const AssertionSpec& assertion, const ScenarioReport& report);

void to_json(nlohmann::json& j, const ScenarioReport& r);
void from_json(const nlohmann::json& j, ScenarioReport& r);

/// Canonical report text (two-space indented JSON plus trailing newline).
std::string report_document(const ScenarioReport& report);

/// Column-aligned adaptation timeline (checks omitted).
void print_timeline(std::ostream& out, const ScenarioReport& report);

struct TimelineDiffItem {
    std::string node;
    bool in_a = false;  ///< false: only in b
    TimelineEntry entry;
};

struct FinalStateDiff {
    std::string node;
    std::string flag;
    std::string a;
    std::string b;
};

/// Adaptation entries (checks excluded) that are not part of the longest
/// common subsequence of the two timelines, per node, plus final-state
/// differences. Entries compare on time, kind, name, value, detail and
/// trigger; sequence numbers are ignored.
struct TimelineDiff {
    std::vector<TimelineDiffItem> items;
    std::vector<FinalStateDiff> final_state;
    std::vector<std::string> missing_nodes;

    bool empty() const { return items.empty() && final_state.empty() && missing_nodes.empty(); }
};

TimelineDiff diff_timelines(const ScenarioReport& a, const ScenarioReport& b);
nlohmann::json to_json(const TimelineDiff& diff);

}  // namespace adaptiflow::scenario

#endif  // ADAPTIFLOW_RUNNER_HPP_
