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

#ifndef ADAPTIFLOW_NODE_HPP_
#define ADAPTIFLOW_NODE_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptiflow/actions.hpp"
#include "adaptiflow/clock.hpp"
#include "adaptiflow/events.hpp"
#include "adaptiflow/metrics.hpp"
#include "adaptiflow/observation.hpp"
#include "adaptiflow/state.hpp"
#include "adaptiflow/teastore/sim.hpp"
#include "adaptiflow/timeline.hpp"

namespace adaptiflow {

struct Request {
    TimestampMs at = 0;
    std::string client_ip;
    std::string path = "/";

    bool operator==(const Request&) const = default;
};

enum class ResponseClass { ok, maintenance, unavailable, error, unreachable };

std::string_view to_string(ResponseClass c);
ResponseClass response_class_from_string(std::string_view s);

struct Response {
    ResponseClass status = ResponseClass::ok;
    std::string body;
    double latency_ms = 0.0;

    bool operator==(const Response&) const = default;
};

/// Moves control-plane calls and business traffic between nodes. Addresses
/// are opaque to nodes: "loopback://<id>" or "host:port".
class Transport {
public:
    virtual ~Transport() = default;

    /// Throws UnknownAction or TargetUnreachable. A failing actuator comes
    /// back as an outcome with status failed.
    virtual ActionOutcome invoke_action(const std::string& address, const std::string& action_id,
                                        TimestampMs at, const std::string& trigger) = 0;

    /// Never throws; an unreachable target yields delivered=false.
    virtual DeliveryReport deliver(const std::string& address, const Notification& n) = 0;

    /// Throws TargetUnreachable.
    virtual std::vector<Response> send_requests(const std::string& address,
                                                std::span<const Request> requests) = 0;
};

class ServiceNode;

/// Business behaviour of a node (what its endpoints answer).
class RequestHandler {
public:
    virtual ~RequestHandler() = default;
    virtual std::vector<Response> handle(ServiceNode& node, std::span<const Request> requests) = 0;
};

struct Registration {
    std::string node;
    std::string id;
};

using SubscriptionId = std::uint64_t;

struct ActionInfo {
    std::string id;
    ActionLevel level;
    ExecutionMode mode;
    std::string inverse;
};

struct EventInfo {
    std::string name;
    std::string collector;
    std::string evaluator;
};

struct SubscriptionInfo {
    SubscriptionId id = 0;
    Subscription subscription;
    SubscriberState state;
};

struct CheckResult {
    bool triggered = false;
    MetricsSample sample;
};

/// An instrumented service: registries of collectors, actions, events and
/// subscriptions, its adaptation flags, and an append-only timeline.
///
/// All state lives behind one mutex. Outbound transport calls are made with
/// that mutex released, so two nodes calling each other cannot deadlock.
/// Tick bodies (periodic or on demand) are serialized by a second mutex.
class ServiceNode {
public:
    ServiceNode(std::string id, ServiceRole role, const Clock& clock,
                teastore::ServiceSimulation sim = {});
    ~ServiceNode();

    ServiceNode(const ServiceNode&) = delete;
    ServiceNode& operator=(const ServiceNode&) = delete;

    const std::string& id() const { return id_; }
    ServiceRole role() const { return role_; }
    const Clock& clock() const { return clock_; }
    const teastore::ServiceSimulation& sim() const { return sim_; }

    // Wiring.

    void set_transport(Transport* transport);
    Transport* transport() const;
    void set_address(std::string address);
    std::string address() const;
    /// Throws std::invalid_argument when `peer_id` is this node.
    void add_peer(const std::string& peer_id, std::string address);
    void remove_peer(const std::string& peer_id);
    std::map<std::string, std::string> peers() const;
    std::optional<std::string> peer_address(const std::string& peer_id) const;
    void set_request_handler(std::shared_ptr<RequestHandler> handler);
    void set_observation(ObservationConfig config);
    ObservationConfig observation() const;

    // Registries.

    Registration register_collector(std::unique_ptr<MetricsCollector> collector);
    Registration register_action(std::unique_ptr<AdaptationAction> action);
    /// Throws DuplicateEventName, UnknownCollector, std::invalid_argument.
    Registration register_event(ConditionalEvent event);
    /// Throws UnknownEvent when neither a local event nor a notification
    /// binding carries the name.
    SubscriptionId subscribe(Subscription subscription);
    void unsubscribe(SubscriptionId id);
    /// Swaps the definition in place; the running count is discarded.
    void replace_subscription(SubscriptionId id, Subscription subscription);
    void bind_notification(NotificationBinding binding);

    std::vector<std::string> collector_ids() const;
    std::vector<ActionInfo> actions() const;
    std::vector<EventInfo> events() const;
    std::vector<SubscriptionInfo> subscriptions() const;
    bool has_event(const std::string& name) const;

    // Monitoring.

    /// Fresh sample; also becomes the collector's latest sample.
    MetricsSample collect(const std::string& collector_id, TimestampMs now);
    /// Latest sample of every collector, collecting at `now` where none exists.
    std::vector<MetricsSample> latest_samples(TimestampMs now);

    // Execution.

    /// Throws UnknownAction; throws ActionFailed after recording the failed
    /// outcome.
    ActionOutcome apply_action(const std::string& action_id, TimestampMs now,
                               const std::string& trigger = {});
    /// Simulated actuator failure for tests; empty reason clears it.
    void inject_action_failure(const std::string& action_id, std::string reason);

    // Events.

    CheckResult check_event(const std::string& event_name, TimestampMs now);
    /// Dispatch of a triggered event to its subscriptions.
    std::vector<ActionOutcome> notify_subscribers(const std::string& event_name,
                                                  const MetricsSample& sample, TimestampMs now);
    void reset_subscriber(const std::string& event_name);

    TickReport tick(TimestampMs now);
    TickReport trigger_on_demand(const std::string& event_name, TimestampMs now);

    // Mesh.

    DeliveryReport receive_notification(const Notification& n);
    std::vector<Response> handle_requests(std::span<const Request> requests);

    // Inspection.

    AdaptationState state() const;
    std::vector<TimelineEntry> timeline() const;
    void note(TimestampMs at, std::string text);

private:
    class Context;
    struct SubscriptionSlot {
        SubscriptionId id;
        Subscription subscription;
        SubscriberState state;
    };
    struct Firing {
        std::string event;
        std::vector<std::string> actions;
        std::string evidence;
    };
    struct PendingAsync {
        std::string action_id;
        std::string trigger;
        std::string evidence;
        TimestampMs queued_at;
    };

    TimelineEntry& append_locked(TimestampMs at, EntryKind kind, std::string name,
                                 std::string value = {}, std::string detail = {});
    std::vector<FlagChange> update_state_locked(TimestampMs at,
                                                const std::function<void(AdaptationState&)>& mutate,
                                                const std::string& cause);
    bool update_state(TimestampMs at, const std::function<void(AdaptationState&)>& mutate,
                      const std::string& cause);
    std::vector<DeliveryReport> broadcast(const Notification& n);
    void reset_locked(const std::string& event_name);
    bool has_event_locked(const std::string& name) const;
    bool knows_event_locked(const std::string& name) const;
    /// Throws UnknownAction for a local reference that is not registered.
    void check_refs_locked(const std::vector<std::string>& refs) const;
    CheckResult check_locked(const std::string& event_name, TimestampMs now);
    /// Feeds one verdict to every subscription on the event; resets of
    /// firing subscriptions are applied here, actions are returned.
    std::vector<Firing> advance_locked(const std::string& event_name, bool verdict,
                                       const MetricsSample& sample,
                                       std::vector<SubscriptionProgress>* progress);
    std::vector<ActionOutcome> run_firings(const std::vector<Firing>& firings, TimestampMs now);
    ActionOutcome run_action_ref(const std::string& ref, TimestampMs now, const std::string& trigger,
                                 const std::string& evidence);
    ActionOutcome execute_now(const std::shared_ptr<AdaptationAction>& action, TimestampMs now,
                              const std::string& trigger, const std::string& evidence, bool deferred);
    void record_outcome_locked(const ActionOutcome& outcome);
    std::vector<ActionOutcome> drain_async(TimestampMs now);
    EventCheck observe_event(const std::string& event_name, TimestampMs now);

    const std::string id_;
    const ServiceRole role_;
    const Clock& clock_;
    const teastore::ServiceSimulation sim_;

    mutable std::mutex mutex_;
    std::mutex tick_mutex_;

    Transport* transport_ = nullptr;
    std::string address_;
    std::map<std::string, std::string> peers_;
    std::shared_ptr<RequestHandler> handler_;
    ObservationConfig observation_;

    std::map<std::string, std::unique_ptr<MetricsCollector>> collectors_;
    std::map<std::string, MetricsSample> latest_;
    std::map<std::string, std::shared_ptr<AdaptationAction>> actions_;
    std::map<std::string, std::string> injected_failures_;
    std::vector<ConditionalEvent> events_;
    std::vector<SubscriptionSlot> subscriptions_;
    std::vector<NotificationBinding> bindings_;
    SubscriptionId next_subscription_id_ = 1;
    std::deque<PendingAsync> async_queue_;

    AdaptationState state_;
    std::vector<TimelineEntry> timeline_;
    std::uint64_t next_seq_ = 0;
};

/// Evidence sample plus "state.<flag>" keys describing `state`; this is what
/// subscription filters see.
MetricsSample with_state_keys(const MetricsSample& sample, const AdaptationState& state);

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_NODE_HPP_
