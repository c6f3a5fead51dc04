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

#include "adaptiflow/node.hpp"

#include <algorithm>
#include <stdexcept>

#include "adaptiflow/wire.hpp"

namespace adaptiflow {

std::string_view to_string(ResponseClass c)
{
    switch (c) {
    case ResponseClass::ok: return "ok";
    case ResponseClass::maintenance: return "maintenance";
    case ResponseClass::unavailable: return "unavailable";
    case ResponseClass::error: return "error";
    case ResponseClass::unreachable: return "unreachable";
    }
    return "error";
}

ResponseClass response_class_from_string(std::string_view s)
{
    for (auto c : {ResponseClass::ok, ResponseClass::maintenance, ResponseClass::unavailable,
                   ResponseClass::error, ResponseClass::unreachable}) {
        if (to_string(c) == s) return c;
    }
    throw std::invalid_argument("unknown response class: " + std::string(s));
}

MetricsSample with_state_keys(const MetricsSample& sample, const AdaptationState& state)
{
    MetricsSample out = sample;
    for (const auto& [flag, value] : state.flags()) {
        if (value == "true" || value == "false") {
            out.values["state." + flag] = (value == "true");
        } else {
            out.values["state." + flag] = value;
        }
    }
    return out;
}

namespace {

std::pair<std::string, std::string> split_ref(const std::string& ref)
{
    auto colon = ref.find(':');
    if (colon == std::string::npos) return {{}, ref};
    return {ref.substr(0, colon), ref.substr(colon + 1)};
}

}  // namespace

// The view an action gets of its node while it runs. The node mutex is not
// held, so actions may call out over the transport.
class ServiceNode::Context final : public ActionContext {
public:
    Context(ServiceNode& node, TimestampMs now, const std::string& action_id, const std::string& trigger,
            const std::string& evidence)
        : node_(node), now_(now), action_id_(action_id), trigger_(trigger), evidence_(evidence) {}

    const std::string& node_id() const override { return node_.id_; }
    TimestampMs now() const override { return now_; }
    const std::string& trigger() const override { return trigger_; }
    const std::string& evidence() const override { return evidence_; }

    bool update_state(const std::function<void(AdaptationState&)>& mutate) override
    {
        return node_.update_state(now_, mutate, action_id_);
    }

    std::vector<DeliveryReport> broadcast(const Notification& n) override { return node_.broadcast(n); }

    void note(std::string text) override { node_.note(now_, std::move(text)); }

private:
    ServiceNode& node_;
    TimestampMs now_;
    const std::string& action_id_;
    const std::string& trigger_;
    const std::string& evidence_;
};

ServiceNode::ServiceNode(std::string id, ServiceRole role, const Clock& clock, teastore::ServiceSimulation sim)
    : id_(std::move(id)), role_(role), clock_(clock), sim_(std::move(sim)),
      state_(AdaptationState::initial_for(role))
{
    if (id_.empty()) throw std::invalid_argument("node id must not be empty");
    if (id_.find(':') != std::string::npos) throw std::invalid_argument("node id must not contain ':'");
}

ServiceNode::~ServiceNode() = default;

void ServiceNode::set_transport(Transport* transport)
{
    std::lock_guard lock(mutex_);
    transport_ = transport;
}

Transport* ServiceNode::transport() const
{
    std::lock_guard lock(mutex_);
    return transport_;
}

void ServiceNode::set_address(std::string address)
{
    std::lock_guard lock(mutex_);
    address_ = std::move(address);
}

std::string ServiceNode::address() const
{
    std::lock_guard lock(mutex_);
    return address_;
}

void ServiceNode::add_peer(const std::string& peer_id, std::string address)
{
    if (peer_id == id_) throw std::invalid_argument("node " + id_ + " cannot be its own peer");
    if (peer_id.empty()) throw std::invalid_argument("peer id must not be empty");
    std::lock_guard lock(mutex_);
    peers_[peer_id] = std::move(address);
}

void ServiceNode::remove_peer(const std::string& peer_id)
{
    std::lock_guard lock(mutex_);
    peers_.erase(peer_id);
}

std::map<std::string, std::string> ServiceNode::peers() const
{
    std::lock_guard lock(mutex_);
    return peers_;
}

std::optional<std::string> ServiceNode::peer_address(const std::string& peer_id) const
{
    std::lock_guard lock(mutex_);
    auto it = peers_.find(peer_id);
    if (it == peers_.end()) return std::nullopt;
    return it->second;
}

void ServiceNode::set_request_handler(std::shared_ptr<RequestHandler> handler)
{
    std::lock_guard lock(mutex_);
    handler_ = std::move(handler);
}

void ServiceNode::set_observation(ObservationConfig config)
{
    if (config.mode == ObservationMode::periodic && config.interval_ms <= 0) {
        throw std::invalid_argument("periodic observation needs a positive interval");
    }
    std::lock_guard lock(mutex_);
    for (const auto& name : config.observed_events) {
        bool known = std::any_of(events_.begin(), events_.end(),
                                 [&](const ConditionalEvent& e) { return e.name == name; });
        if (!known) throw UnknownEvent(name);
    }
    observation_ = std::move(config);
}

ObservationConfig ServiceNode::observation() const
{
    std::lock_guard lock(mutex_);
    return observation_;
}

Registration ServiceNode::register_collector(std::unique_ptr<MetricsCollector> collector)
{
    if (!collector) throw std::invalid_argument("null collector");
    std::lock_guard lock(mutex_);
    std::string cid = collector->id();
    if (collectors_.count(cid)) throw DuplicateCollectorId(cid);
    collectors_.emplace(cid, std::move(collector));
    return {id_, cid};
}

Registration ServiceNode::register_action(std::unique_ptr<AdaptationAction> action)
{
    if (!action) throw std::invalid_argument("null action");
    std::lock_guard lock(mutex_);
    std::string aid = action->id();
    if (aid.empty() || aid.find(':') != std::string::npos) {
        throw std::invalid_argument("malformed action id '" + aid + "'");
    }
    if (actions_.count(aid)) throw DuplicateActionId(aid);
    actions_.emplace(aid, std::shared_ptr<AdaptationAction>(std::move(action)));
    return {id_, aid};
}

Registration ServiceNode::register_event(ConditionalEvent event)
{
    if (event.name.empty()) throw std::invalid_argument("event name must not be empty");
    if (!event.evaluator) throw std::invalid_argument("event " + event.name + " has no evaluator");
    std::lock_guard lock(mutex_);
    if (has_event_locked(event.name)) throw DuplicateEventName(event.name);
    if (!collectors_.count(event.collector_id)) throw UnknownCollector(event.collector_id);
    std::string name = event.name;
    events_.push_back(std::move(event));
    return {id_, name};
}

bool ServiceNode::has_event_locked(const std::string& name) const
{
    return std::any_of(events_.begin(), events_.end(),
                       [&](const ConditionalEvent& e) { return e.name == name; });
}

bool ServiceNode::knows_event_locked(const std::string& name) const
{
    return has_event_locked(name) ||
           std::any_of(bindings_.begin(), bindings_.end(),
                       [&](const NotificationBinding& b) { return b.event_name == name; });
}

void ServiceNode::check_refs_locked(const std::vector<std::string>& refs) const
{
    for (const auto& ref : refs) {
        auto [peer, action] = split_ref(ref);
        if (peer.empty() && !actions_.count(action)) throw UnknownAction(action);
    }
}

SubscriptionId ServiceNode::subscribe(Subscription subscription)
{
    validate(subscription);
    std::lock_guard lock(mutex_);
    if (!knows_event_locked(subscription.event_name)) throw UnknownEvent(subscription.event_name);
    check_refs_locked(subscription.actions);
    SubscriptionSlot slot{next_subscription_id_++, std::move(subscription), {}};
    slot.state.fired = slot.subscription.starts_latched;
    subscriptions_.push_back(std::move(slot));
    return subscriptions_.back().id;
}

void ServiceNode::unsubscribe(SubscriptionId sid)
{
    std::lock_guard lock(mutex_);
    auto it = std::find_if(subscriptions_.begin(), subscriptions_.end(),
                           [&](const SubscriptionSlot& s) { return s.id == sid; });
    if (it == subscriptions_.end()) throw std::out_of_range("unknown subscription " + std::to_string(sid));
    subscriptions_.erase(it);
}

void ServiceNode::replace_subscription(SubscriptionId sid, Subscription subscription)
{
    validate(subscription);
    std::lock_guard lock(mutex_);
    if (!knows_event_locked(subscription.event_name)) throw UnknownEvent(subscription.event_name);
    check_refs_locked(subscription.actions);
    auto it = std::find_if(subscriptions_.begin(), subscriptions_.end(),
                           [&](const SubscriptionSlot& s) { return s.id == sid; });
    if (it == subscriptions_.end()) throw std::out_of_range("unknown subscription " + std::to_string(sid));
    it->subscription = std::move(subscription);
    it->state = SubscriberState{};
    it->state.fired = it->subscription.starts_latched;
}

void ServiceNode::bind_notification(NotificationBinding binding)
{
    if (binding.event_name.empty()) throw std::invalid_argument("binding needs an event name");
    std::lock_guard lock(mutex_);
    check_refs_locked(binding.actions);
    bindings_.push_back(std::move(binding));
}

std::vector<std::string> ServiceNode::collector_ids() const
{
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [cid, c] : collectors_) out.push_back(cid);
    return out;
}

std::vector<ActionInfo> ServiceNode::actions() const
{
    std::lock_guard lock(mutex_);
    std::vector<ActionInfo> out;
    for (const auto& [aid, a] : actions_) out.push_back({aid, a->level(), a->mode(), a->inverse()});
    return out;
}

std::vector<EventInfo> ServiceNode::events() const
{
    std::lock_guard lock(mutex_);
    std::vector<EventInfo> out;
    for (const auto& e : events_) out.push_back({e.name, e.collector_id, e.evaluator->id()});
    return out;
}

std::vector<SubscriptionInfo> ServiceNode::subscriptions() const
{
    std::lock_guard lock(mutex_);
    std::vector<SubscriptionInfo> out;
    for (const auto& s : subscriptions_) out.push_back({s.id, s.subscription, s.state});
    return out;
}

bool ServiceNode::has_event(const std::string& name) const
{
    std::lock_guard lock(mutex_);
    return has_event_locked(name);
}

MetricsSample ServiceNode::collect(const std::string& collector_id, TimestampMs now)
{
    std::lock_guard lock(mutex_);
    auto it = collectors_.find(collector_id);
    if (it == collectors_.end()) throw UnknownCollector(collector_id);
    auto sample = it->second->collect(id_, now);
    latest_[collector_id] = sample;
    return sample;
}

std::vector<MetricsSample> ServiceNode::latest_samples(TimestampMs now)
{
    std::lock_guard lock(mutex_);
    std::vector<MetricsSample> out;
    for (const auto& [cid, c] : collectors_) {
        auto it = latest_.find(cid);
        if (it == latest_.end()) {
            it = latest_.emplace(cid, c->collect(id_, now)).first;
        }
        out.push_back(it->second);
    }
    return out;
}

TimelineEntry& ServiceNode::append_locked(TimestampMs at, EntryKind kind, std::string name,
                                          std::string value, std::string detail)
{
    TimelineEntry e;
    e.seq = next_seq_++;
    e.at = at;
    e.kind = kind;
    e.name = std::move(name);
    e.value = std::move(value);
    e.detail = std::move(detail);
    timeline_.push_back(std::move(e));
    return timeline_.back();
}

std::vector<FlagChange> ServiceNode::update_state_locked(
    TimestampMs at, const std::function<void(AdaptationState&)>& mutate, const std::string& cause)
{
    AdaptationState next = state_;
    mutate(next);
    auto changes = diff(state_, next);
    state_ = next;
    for (const auto& c : changes) {
        auto& e = append_locked(at, EntryKind::transition, c.flag, c.to, c.from);
        e.trigger = cause;
    }
    return changes;
}

bool ServiceNode::update_state(TimestampMs at, const std::function<void(AdaptationState&)>& mutate,
                               const std::string& cause)
{
    std::lock_guard lock(mutex_);
    return !update_state_locked(at, mutate, cause).empty();
}

std::vector<DeliveryReport> ServiceNode::broadcast(const Notification& n)
{
    std::map<std::string, std::string> peers;
    Transport* transport = nullptr;
    {
        std::lock_guard lock(mutex_);
        peers = peers_;
        transport = transport_;
    }
    std::vector<DeliveryReport> reports;
    for (const auto& [peer, address] : peers) {
        DeliveryReport r;
        if (transport) {
            r = transport->deliver(address, n);
        } else {
            r.delivered = false;
            r.detail = "no transport";
        }
        r.target = peer;
        std::lock_guard lock(mutex_);
        auto& e = append_locked(n.sent_at, EntryKind::delivery, n.event_name, peer,
                                r.delivered ? "delivered" : "failed: " + r.detail);
        e.trigger = n.event_name;
        reports.push_back(std::move(r));
    }
    return reports;
}

void ServiceNode::record_outcome_locked(const ActionOutcome& o)
{
    auto& e = append_locked(o.applied_at, EntryKind::action, o.action_id, std::string(to_string(o.status)),
                            o.detail);
    e.trigger = o.trigger;
}

ActionOutcome ServiceNode::execute_now(const std::shared_ptr<AdaptationAction>& action, TimestampMs now,
                                       const std::string& trigger, const std::string& evidence, bool deferred)
{
    ActionOutcome o;
    o.node = id_;
    o.action_id = action->id();
    o.applied_at = now;
    o.trigger = trigger;

    {
        std::lock_guard lock(mutex_);
        if (auto f = injected_failures_.find(action->id()); f != injected_failures_.end()) {
            o.status = OutcomeStatus::failed;
            o.detail = f->second;
            record_outcome_locked(o);
            return o;
        }
        if (action->mode() == ExecutionMode::async && !deferred) {
            async_queue_.push_back({action->id(), trigger, evidence, now});
            o.status = OutcomeStatus::queued;
            o.detail = "deferred to next tick";
            record_outcome_locked(o);
            return o;
        }
    }

    try {
        Context ctx(*this, now, action->id(), trigger, evidence);
        auto result = action->execute(ctx);
        o.status = result.status;
        o.detail = std::move(result.detail);
    } catch (const std::exception& ex) {
        o.status = OutcomeStatus::failed;
        o.detail = ex.what();
    }
    std::lock_guard lock(mutex_);
    record_outcome_locked(o);
    return o;
}

ActionOutcome ServiceNode::apply_action(const std::string& action_id, TimestampMs now, const std::string& trigger)
{
    std::shared_ptr<AdaptationAction> action;
    {
        std::lock_guard lock(mutex_);
        auto it = actions_.find(action_id);
        if (it == actions_.end()) throw UnknownAction(action_id);
        action = it->second;
    }
    auto outcome = execute_now(action, now, trigger, {}, false);
    if (outcome.status == OutcomeStatus::failed) throw ActionFailed(outcome);
    return outcome;
}

void ServiceNode::inject_action_failure(const std::string& action_id, std::string reason)
{
    std::lock_guard lock(mutex_);
    if (reason.empty()) {
        injected_failures_.erase(action_id);
    } else {
        injected_failures_[action_id] = std::move(reason);
    }
}

ActionOutcome ServiceNode::run_action_ref(const std::string& ref, TimestampMs now, const std::string& trigger,
                                          const std::string& evidence)
{
    auto [peer, action_id] = split_ref(ref);
    if (peer.empty()) {
        std::shared_ptr<AdaptationAction> action;
        {
            std::lock_guard lock(mutex_);
            auto it = actions_.find(action_id);
            if (it != actions_.end()) action = it->second;
        }
        if (action) return execute_now(action, now, trigger, evidence, false);
        ActionOutcome o{id_, action_id, OutcomeStatus::failed, now, "unknown action", trigger};
        std::lock_guard lock(mutex_);
        record_outcome_locked(o);
        return o;
    }

    ActionOutcome o{id_, ref, OutcomeStatus::failed, now, {}, trigger};
    std::optional<std::string> address;
    Transport* transport = nullptr;
    {
        std::lock_guard lock(mutex_);
        if (auto it = peers_.find(peer); it != peers_.end()) address = it->second;
        transport = transport_;
    }
    if (!address) {
        o.detail = "unknown peer " + peer;
    } else if (!transport) {
        o.detail = "no transport";
    } else {
        try {
            auto remote = transport->invoke_action(*address, action_id, now, trigger);
            o.status = remote.status;
            o.detail = remote.detail.empty() ? "remote" : "remote: " + remote.detail;
        } catch (const std::exception& ex) {
            o.detail = ex.what();
        }
    }
    std::lock_guard lock(mutex_);
    record_outcome_locked(o);
    return o;
}

void ServiceNode::reset_locked(const std::string& event_name)
{
    for (auto& s : subscriptions_) {
        if (s.subscription.event_name == event_name) s.state.reset();
    }
}

void ServiceNode::reset_subscriber(const std::string& event_name)
{
    std::lock_guard lock(mutex_);
    if (!knows_event_locked(event_name)) throw UnknownEvent(event_name);
    reset_locked(event_name);
}

CheckResult ServiceNode::check_locked(const std::string& event_name, TimestampMs now)
{
    auto ev = std::find_if(events_.begin(), events_.end(),
                           [&](const ConditionalEvent& e) { return e.name == event_name; });
    if (ev == events_.end()) throw UnknownEvent(event_name);
    auto& collector = collectors_.at(ev->collector_id);
    CheckResult r;
    r.sample = collector->collect(id_, now);
    latest_[ev->collector_id] = r.sample;
    r.triggered = ev->evaluator->evaluate(r.sample);
    return r;
}

CheckResult ServiceNode::check_event(const std::string& event_name, TimestampMs now)
{
    std::lock_guard lock(mutex_);
    return check_locked(event_name, now);
}

std::vector<ServiceNode::Firing> ServiceNode::advance_locked(const std::string& event_name, bool verdict,
                                                             const MetricsSample& sample,
                                                             std::vector<SubscriptionProgress>* progress)
{
    std::vector<Firing> firings;
    std::optional<MetricsSample> filter_view;
    for (std::size_t i = 0; i < subscriptions_.size(); ++i) {
        auto& slot = subscriptions_[i];
        if (slot.subscription.event_name != event_name) continue;
        bool hit = verdict;
        if (hit && slot.subscription.filter) {
            if (!filter_view) filter_view = with_state_keys(sample, state_);
            hit = slot.subscription.filter->evaluate(*filter_view);
        }
        bool fired = slot.state.observe(hit, slot.subscription.strategy);
        if (progress) progress->push_back({i, hit, slot.state.consecutive_hits, fired});
        if (fired) firings.push_back({event_name, slot.subscription.actions, sample_digest(sample)});
        if (fired) {
            for (const auto& other : slot.subscription.resets) reset_locked(other);
        }
    }
    return firings;
}

std::vector<ActionOutcome> ServiceNode::run_firings(const std::vector<Firing>& firings, TimestampMs now)
{
    std::vector<ActionOutcome> outcomes;
    for (const auto& f : firings) {
        for (const auto& ref : f.actions) outcomes.push_back(run_action_ref(ref, now, f.event, f.evidence));
    }
    return outcomes;
}

std::vector<ActionOutcome> ServiceNode::notify_subscribers(const std::string& event_name,
                                                           const MetricsSample& sample, TimestampMs now)
{
    std::vector<Firing> firings;
    {
        std::lock_guard lock(mutex_);
        if (!knows_event_locked(event_name)) throw UnknownEvent(event_name);
        firings = advance_locked(event_name, true, sample, nullptr);
    }
    return run_firings(firings, now);
}

EventCheck ServiceNode::observe_event(const std::string& event_name, TimestampMs now)
{
    EventCheck check;
    check.event = event_name;
    std::vector<Firing> firings;
    {
        std::lock_guard lock(mutex_);
        try {
            auto r = check_locked(event_name, now);
            check.triggered = r.triggered;
            check.sample = std::move(r.sample);
        } catch (const UnknownEvent&) {
            throw;
        } catch (const std::exception& ex) {
            check.error = ex.what();
            append_locked(now, EntryKind::check, event_name, "error", check.error);
            return check;
        }
        std::vector<SubscriptionProgress> progress;
        firings = advance_locked(event_name, check.triggered, check.sample, &progress);
        auto& e = append_locked(now, EntryKind::check, event_name, check.triggered ? "true" : "false");
        e.progress = std::move(progress);
    }
    check.outcomes = run_firings(firings, now);
    return check;
}

std::vector<ActionOutcome> ServiceNode::drain_async(TimestampMs now)
{
    std::deque<PendingAsync> pending;
    {
        std::lock_guard lock(mutex_);
        pending.swap(async_queue_);
    }
    std::vector<ActionOutcome> outcomes;
    for (const auto& p : pending) {
        std::shared_ptr<AdaptationAction> action;
        {
            std::lock_guard lock(mutex_);
            auto it = actions_.find(p.action_id);
            if (it != actions_.end()) action = it->second;
        }
        if (action) outcomes.push_back(execute_now(action, now, p.trigger, p.evidence, true));
    }
    return outcomes;
}

TickReport ServiceNode::tick(TimestampMs now)
{
    std::lock_guard tick_lock(tick_mutex_);
    TickReport report;
    report.node = id_;
    report.at = now;
    report.deferred = drain_async(now);

    std::vector<std::string> names;
    {
        std::lock_guard lock(mutex_);
        if (observation_.observed_events.empty()) {
            for (const auto& e : events_) names.push_back(e.name);
        } else {
            names = observation_.observed_events;
        }
    }
    for (const auto& name : names) report.checks.push_back(observe_event(name, now));
    return report;
}

TickReport ServiceNode::trigger_on_demand(const std::string& event_name, TimestampMs now)
{
    if (!has_event(event_name)) throw UnknownEvent(event_name);
    std::lock_guard tick_lock(tick_mutex_);
    TickReport report;
    report.node = id_;
    report.at = now;
    report.on_demand = true;
    report.deferred = drain_async(now);
    report.checks.push_back(observe_event(event_name, now));
    return report;
}

DeliveryReport ServiceNode::receive_notification(const Notification& n)
{
    if (n.event_name.empty()) return {id_, false, "empty event name"};
    TimestampMs now = clock_.now();
    std::vector<Firing> firings;
    {
        std::lock_guard lock(mutex_);
        append_locked(now, EntryKind::notification, n.event_name, n.origin);
        for (const auto& b : bindings_) {
            if (b.event_name != n.event_name) continue;
            if (b.arm) {
                bool armed = *b.arm;
                update_state_locked(now, [armed](AdaptationState& s) { s.ddos_armed = armed; },
                                    n.event_name);
            }
            for (const auto& other : b.resets) reset_locked(other);
            if (!b.actions.empty()) firings.push_back({n.event_name, b.actions, n.evidence});
        }
        // A peer's verdict only counts where the node has no local
        // definition of the event; local confirmations stay local.
        if (!has_event_locked(n.event_name)) {
            MetricsSample evidence{n.origin, n.sent_at, {}};
            for (const auto& [k, v] : n.payload) evidence.values[k] = v;
            auto subs = advance_locked(n.event_name, true, evidence, nullptr);
            firings.insert(firings.end(), subs.begin(), subs.end());
        }
    }
    run_firings(firings, now);
    return {id_, true, "accepted"};
}

std::vector<Response> ServiceNode::handle_requests(std::span<const Request> requests)
{
    std::shared_ptr<RequestHandler> handler;
    {
        std::lock_guard lock(mutex_);
        handler = handler_;
    }
    if (handler) return handler->handle(*this, requests);
    return std::vector<Response>(requests.size(), Response{});
}

AdaptationState ServiceNode::state() const
{
    std::lock_guard lock(mutex_);
    return state_;
}

std::vector<TimelineEntry> ServiceNode::timeline() const
{
    std::lock_guard lock(mutex_);
    return timeline_;
}

void ServiceNode::note(TimestampMs at, std::string text)
{
    std::lock_guard lock(mutex_);
    append_locked(at, EntryKind::note, "note", {}, std::move(text));
}

}  // namespace adaptiflow
