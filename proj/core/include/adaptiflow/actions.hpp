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

#ifndef ADAPTIFLOW_ACTIONS_HPP_
#define ADAPTIFLOW_ACTIONS_HPP_

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "adaptiflow/clock.hpp"
#include "adaptiflow/errors.hpp"
#include "adaptiflow/state.hpp"

namespace adaptiflow {

enum class ActionLevel { business, infrastructure };
enum class ExecutionMode { sync, async };

/// `queued` is reported by apply_action for async actions; the real outcome
/// is recorded when the deferred application runs on the next tick.
enum class OutcomeStatus { applied, already_in_state, failed, queued };

std::string_view to_string(ActionLevel level);
std::string_view to_string(ExecutionMode mode);
std::string_view to_string(OutcomeStatus status);
ActionLevel action_level_from_string(std::string_view s);
ExecutionMode execution_mode_from_string(std::string_view s);
OutcomeStatus outcome_status_from_string(std::string_view s);

struct ActionOutcome {
    std::string node;
    std::string action_id;
    OutcomeStatus status = OutcomeStatus::applied;
    TimestampMs applied_at = 0;
    std::string detail;
    std::string trigger;  ///< triggering event, empty for direct invocation

    bool operator==(const ActionOutcome&) const = default;
};

class ActionFailed : public Error {
public:
    explicit ActionFailed(ActionOutcome outcome)
        : Error("action failed: " + outcome.action_id + ": " + outcome.detail),
          outcome_(std::move(outcome)) {}

    const ActionOutcome& outcome() const { return outcome_; }

private:
    ActionOutcome outcome_;
};

struct Notification {
    std::string event_name;
    std::string origin;
    TimestampMs sent_at = 0;
    /// Digest of the sample that made the sender fire; empty when the
    /// broadcast was invoked directly.
    std::string evidence;
    std::map<std::string, std::string> payload;

    bool operator==(const Notification&) const = default;
};

struct DeliveryReport {
    std::string target;
    bool delivered = false;
    std::string detail;
};

/// What an action may touch while it runs. Implemented by the hosting node.
class ActionContext {
public:
    virtual ~ActionContext() = default;

    virtual const std::string& node_id() const = 0;
    virtual TimestampMs now() const = 0;
    virtual const std::string& trigger() const = 0;
    /// Digest of the evidence sample behind the trigger, if any.
    virtual const std::string& evidence() const = 0;

    /// Applies `mutate` to the node's adaptation state atomically. Returns
    /// true when any flag changed.
    virtual bool update_state(const std::function<void(AdaptationState&)>& mutate) = 0;

    /// Sends `n` to every peer, in peer-id order. Never throws.
    virtual std::vector<DeliveryReport> broadcast(const Notification& n) = 0;

    virtual void note(std::string text) = 0;
};

struct ActionResult {
    OutcomeStatus status = OutcomeStatus::applied;
    std::string detail;
};

/// Actuator contract. apply must be idempotent; level and mode never change
/// after construction.
class AdaptationAction {
public:
    AdaptationAction(std::string id, ActionLevel level, ExecutionMode mode, std::string inverse = {})
        : id_(std::move(id)), level_(level), mode_(mode), inverse_(std::move(inverse)) {}
    virtual ~AdaptationAction() = default;

    const std::string& id() const { return id_; }
    ActionLevel level() const { return level_; }
    ExecutionMode mode() const { return mode_; }
    /// Id of the action undoing this one, empty if none.
    const std::string& inverse() const { return inverse_; }

    virtual ActionResult execute(ActionContext& ctx) = 0;

private:
    std::string id_;
    ActionLevel level_;
    ExecutionMode mode_;
    std::string inverse_;
};

/// Business-level switch of one or more adaptation flags.
class StateAction final : public AdaptationAction {
public:
    StateAction(std::string id, std::string inverse, std::function<void(AdaptationState&)> target,
                ExecutionMode mode = ExecutionMode::sync);

    ActionResult execute(ActionContext& ctx) override;

private:
    std::function<void(AdaptationState&)> target_;
};

/// Tells every peer about an event. The notification carries the name of
/// the event that triggered the action, or `default_event` when invoked
/// directly.
class BroadcastAction final : public AdaptationAction {
public:
    BroadcastAction(std::string id, std::string default_event,
                    std::map<std::string, std::string> payload = {}, std::string note = {});

    ActionResult execute(ActionContext& ctx) override;
    const std::string& default_event() const { return default_event_; }

private:
    std::string default_event_;
    std::map<std::string, std::string> payload_;
    std::string note_;
};

/// Infrastructure-level placeholder (restart, scale, ...). Records what it
/// would have done on the node timeline and changes nothing.
class LoggingActuator final : public AdaptationAction {
public:
    LoggingActuator(std::string id, std::string operation,
                    ExecutionMode mode = ExecutionMode::async);

    ActionResult execute(ActionContext& ctx) override;

private:
    std::string operation_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_ACTIONS_HPP_
