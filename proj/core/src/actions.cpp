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

#include "adaptiflow/actions.hpp"

#include <stdexcept>

namespace adaptiflow {

std::string_view to_string(ActionLevel level)
{
    return level == ActionLevel::business ? "business" : "infrastructure";
}

std::string_view to_string(ExecutionMode mode)
{
    return mode == ExecutionMode::sync ? "sync" : "async";
}

std::string_view to_string(OutcomeStatus status)
{
    switch (status) {
    case OutcomeStatus::applied: return "applied";
    case OutcomeStatus::already_in_state: return "already_in_state";
    case OutcomeStatus::failed: return "failed";
    case OutcomeStatus::queued: return "queued";
    }
    return "failed";
}

ActionLevel action_level_from_string(std::string_view s)
{
    if (s == "business") return ActionLevel::business;
    if (s == "infrastructure") return ActionLevel::infrastructure;
    throw std::invalid_argument("unknown action level: " + std::string(s));
}

ExecutionMode execution_mode_from_string(std::string_view s)
{
    if (s == "sync") return ExecutionMode::sync;
    if (s == "async") return ExecutionMode::async;
    throw std::invalid_argument("unknown execution mode: " + std::string(s));
}

OutcomeStatus outcome_status_from_string(std::string_view s)
{
    if (s == "applied") return OutcomeStatus::applied;
    if (s == "already_in_state") return OutcomeStatus::already_in_state;
    if (s == "failed") return OutcomeStatus::failed;
    if (s == "queued") return OutcomeStatus::queued;
    throw std::invalid_argument("unknown outcome status: " + std::string(s));
}

StateAction::StateAction(std::string id, std::string inverse,
                         std::function<void(AdaptationState&)> target, ExecutionMode mode)
    : AdaptationAction(std::move(id), ActionLevel::business, mode, std::move(inverse)),
      target_(std::move(target))
{
    if (!target_) throw std::invalid_argument("state action needs a target");
}

ActionResult StateAction::execute(ActionContext& ctx)
{
    bool changed = ctx.update_state(target_);
    return {changed ? OutcomeStatus::applied : OutcomeStatus::already_in_state, {}};
}

BroadcastAction::BroadcastAction(std::string id, std::string default_event,
                                 std::map<std::string, std::string> payload, std::string note)
    : AdaptationAction(std::move(id), ActionLevel::business, ExecutionMode::sync),
      default_event_(std::move(default_event)), payload_(std::move(payload)), note_(std::move(note))
{
}

ActionResult BroadcastAction::execute(ActionContext& ctx)
{
    Notification n;
    n.event_name = ctx.trigger().empty() ? default_event_ : ctx.trigger();
    n.origin = ctx.node_id();
    n.sent_at = ctx.now();
    n.evidence = ctx.evidence();
    n.payload = payload_;
    if (!note_.empty()) n.payload.emplace("note", note_);

    auto reports = ctx.broadcast(n);
    std::string failures;
    for (const auto& r : reports) {
        if (r.delivered) continue;
        if (!failures.empty()) failures += "; ";
        failures += r.target + ": " + r.detail;
    }
    if (!failures.empty()) return {OutcomeStatus::failed, "undelivered: " + failures};
    return {OutcomeStatus::applied, "sent " + n.event_name + " to " + std::to_string(reports.size()) + " peers"};
}

LoggingActuator::LoggingActuator(std::string id, std::string operation, ExecutionMode mode)
    : AdaptationAction(std::move(id), ActionLevel::infrastructure, mode),
      operation_(std::move(operation))
{
}

ActionResult LoggingActuator::execute(ActionContext& ctx)
{
    // Infrastructure operations are recorded, not performed.
    ctx.note(id() + ": " + operation_);
    return {OutcomeStatus::applied, operation_};
}

}  // namespace adaptiflow
