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

#ifndef ADAPTIFLOW_EVENTS_HPP_
#define ADAPTIFLOW_EVENTS_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adaptiflow/metrics.hpp"

namespace adaptiflow {

/// Deterministic, side-effect free predicate over a sample.
class ConditionEvaluator {
public:
    explicit ConditionEvaluator(std::string id) : id_(std::move(id)) {}
    virtual ~ConditionEvaluator() = default;

    const std::string& id() const { return id_; }
    virtual bool evaluate(const MetricsSample& sample) const = 0;

private:
    std::string id_;
};

using EvaluatorPtr = std::shared_ptr<const ConditionEvaluator>;

/// Binds one collector to one evaluator under a human-readable name.
struct ConditionalEvent {
    std::string name;
    std::string collector_id;
    EvaluatorPtr evaluator;
};

/// immediate is count(1, consecutive).
struct NotificationStrategy {
    int threshold = 1;
    bool consecutive = true;

    static NotificationStrategy immediate() { return {1, true}; }
    static NotificationStrategy count(int n, bool consecutive = true) { return {n, consecutive}; }

    bool operator==(const NotificationStrategy&) const = default;
};

struct Subscription {
    std::string event_name;
    /// Local action ids, or "peer:ActionId" for a remote invocation.
    std::vector<std::string> actions;
    /// Evaluated against the evidence sample extended with "state.<flag>"
    /// keys; null means every trigger passes.
    EvaluatorPtr filter;
    NotificationStrategy strategy;
    /// Start latched so the subscription waits for a reset before it can
    /// fire. Used by recovery events.
    bool starts_latched = false;
    /// Events whose subscribers are re-armed when this one fires.
    std::vector<std::string> resets;
};

/// Throws std::invalid_argument when the subscription is malformed
/// (empty event name, no actions, threshold < 1).
void validate(const Subscription& subscription);

struct SubscriberState {
    /// Counted triggers since the last reset; under a consecutive strategy
    /// any non-counted observation clears it.
    int consecutive_hits = 0;
    bool fired = false;

    /// Feeds one observation. Returns true when the subscription fires.
    bool observe(bool hit, const NotificationStrategy& strategy);
    void reset() { *this = SubscriberState{}; }

    bool operator==(const SubscriberState&) const = default;
};

/// Inbound notification handling on a receiving node.
struct NotificationBinding {
    std::string event_name;
    std::vector<std::string> actions;
    /// Sets (true) or clears (false) the ddos_armed flag on receipt.
    std::optional<bool> arm;
    std::vector<std::string> resets;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_EVENTS_HPP_
