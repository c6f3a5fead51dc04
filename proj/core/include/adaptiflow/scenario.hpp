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

#ifndef ADAPTIFLOW_SCENARIO_HPP_
#define ADAPTIFLOW_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adaptiflow/errors.hpp"
#include "adaptiflow/events.hpp"
#include "adaptiflow/loadgen.hpp"
#include "adaptiflow/observation.hpp"
#include "adaptiflow/teastore/sim.hpp"

namespace adaptiflow::scenario {

/// Base of every load-time validation error; `path` locates the offending
/// field, e.g. "nodes[2].events[0].evaluator".
class ScenarioError : public Error {
public:
    ScenarioError(std::string path, const std::string& why)
        : Error(path + ": " + why), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class UnresolvedReference : public ScenarioError {
public:
    UnresolvedReference(std::string path, const std::string& what)
        : ScenarioError(std::move(path), "unresolved reference '" + what + "'") {}
};

class InvalidThreshold : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

/// Missing field, wrong type, unknown enumerator.
class SchemaError : public ScenarioError {
public:
    using ScenarioError::ScenarioError;
};

enum class ScenarioKind { self_healing, self_protection, self_optimization, custom };

std::string_view to_string(ScenarioKind kind);

struct CollectorSpec {
    std::string id;
    std::string type;
    std::optional<TimestampMs> window_ms;
};

struct EvaluatorSpec {
    std::string id;
    std::string type;
    std::string metric;        ///< GreaterThan / LessThan / Between / Flag
    std::map<std::string, double> params;
    std::optional<bool> expected;  ///< Flag, Constant
};

struct EventSpec {
    std::string name;
    std::string collector;
    std::string evaluator;
};

struct SubscriptionSpec {
    std::string event;
    std::vector<std::string> actions;
    std::optional<std::string> filter;
    NotificationStrategy strategy;
    bool starts_latched = false;
    std::vector<std::string> resets;
};

struct NodeSpec {
    std::string id;
    ServiceRole role = ServiceRole::custom;
    std::optional<std::string> address;  ///< "host:port" for socket runs
    std::vector<CollectorSpec> collectors;
    std::vector<std::string> actions;
    std::vector<EvaluatorSpec> evaluators;
    std::vector<EventSpec> events;
    std::vector<SubscriptionSpec> subscriptions;
    std::vector<NotificationBinding> notifications;
    ObservationMode observation_mode = ObservationMode::periodic;
    std::vector<std::string> observed_events;
    std::vector<std::string> failure_triggers;
    std::optional<TimestampMs> interval_ms;
    std::optional<teastore::ResourceMap> resource_map;
    std::vector<teastore::ResourcePoint> resource_trajectory;
};

struct FaultSpec {
    double time_s = 0.0;
    std::string target;
    teastore::Fault fault;
};

/// A predicate over one node's timeline (or every node when node == "*").
///
///   action_within        action applied with at in [from_s, to_s]
///   state_within         flag transitions to value with at in [from_s, to_s]
///   notification_within  inbound notification `event` in [from_s, to_s]
///   final_state          flag == value at the end of the run
///   action_count         action applied exactly `count` times
///   no_actions           no action entries at all
///   no_state_change      no transitions with at in [from_s, to_s]
///   confirmations        first firing on `event` happens with exactly
///                        `count` consecutive counted checks
///   never_fires          no subscription on `event` ever fires
struct AssertionSpec {
    std::string type;
    std::string node;
    std::string action;
    std::string flag;
    std::string value;
    std::string event;
    std::optional<double> from_s;
    std::optional<double> to_s;
    std::optional<int> count;
};

struct ScenarioSpec {
    std::string name;
    ScenarioKind kind = ScenarioKind::custom;
    std::string description;
    TimestampMs interval_ms = kDefaultIntervalMs;
    double horizon_s = 120.0;
    std::uint64_t seed = 1;
    std::string entry_node = "webui";
    std::optional<std::string> profile_path;
    std::optional<loadgen::LoadProfile> profile;
    std::vector<NodeSpec> nodes;
    std::vector<FaultSpec> faults;
    std::vector<AssertionSpec> assertions;

    const NodeSpec* find_node(const std::string& id) const;
    NodeSpec* find_node(const std::string& id);
};

/// Validates and resolves a scenario document. A relative profile path is
/// resolved against `base_dir` and loaded.
ScenarioSpec load_scenario(const nlohmann::json& document, const std::filesystem::path& base_dir = {});
ScenarioSpec load_scenario_file(const std::filesystem::path& path);

/// Builds the evaluator a spec describes. Throws SchemaError / InvalidThreshold.
EvaluatorPtr make_evaluator(const EvaluatorSpec& spec, const std::string& path = "evaluator");

}  // namespace adaptiflow::scenario

#endif  // ADAPTIFLOW_SCENARIO_HPP_
