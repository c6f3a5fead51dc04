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

#include "adaptiflow/wire.hpp"

#include <cstdio>
#include <stdexcept>

namespace adaptiflow {

using nlohmann::json;

void to_json(json& j, const MetricValue& v)
{
    std::visit([&j](const auto& x) { j = x; }, v);
}

void from_json(const json& j, MetricValue& v)
{
    if (j.is_boolean()) {
        v = j.get<bool>();
    } else if (j.is_number()) {
        v = j.get<double>();
    } else if (j.is_string()) {
        v = j.get<std::string>();
    } else {
        throw std::invalid_argument("metric value must be a number, boolean or string");
    }
}

void to_json(json& j, const MetricsSample& s)
{
    json values = json::object();
    for (const auto& [k, v] : s.values) to_json(values[k], v);
    j = json{{"source", s.source}, {"collected_at", s.collected_at}, {"values", std::move(values)}};
}

void from_json(const json& j, MetricsSample& s)
{
    s.source = j.at("source").get<std::string>();
    s.collected_at = j.at("collected_at").get<TimestampMs>();
    s.values.clear();
    for (const auto& [k, v] : j.at("values").items()) from_json(v, s.values[k]);
}

void to_json(json& j, const ActionOutcome& o)
{
    j = json{{"node", o.node},
             {"action_id", o.action_id},
             {"status", to_string(o.status)},
             {"applied_at", o.applied_at},
             {"detail", o.detail},
             {"trigger", o.trigger}};
}

void from_json(const json& j, ActionOutcome& o)
{
    o.node = j.value("node", "");
    o.action_id = j.at("action_id").get<std::string>();
    o.status = outcome_status_from_string(j.at("status").get<std::string>());
    o.applied_at = j.at("applied_at").get<TimestampMs>();
    o.detail = j.value("detail", "");
    o.trigger = j.value("trigger", "");
}

void to_json(json& j, const Notification& n)
{
    j = json{{"event_name", n.event_name},
             {"origin_node", n.origin},
             {"sent_at", n.sent_at},
             {"evidence_digest", n.evidence},
             {"payload", n.payload}};
}

void from_json(const json& j, Notification& n)
{
    n.event_name = j.at("event_name").get<std::string>();
    n.origin = j.at("origin_node").get<std::string>();
    n.sent_at = j.at("sent_at").get<TimestampMs>();
    n.evidence = j.value("evidence_digest", "");
    n.payload = j.value("payload", std::map<std::string, std::string>{});
}

void to_json(json& j, const DeliveryReport& d)
{
    j = json{{"target", d.target}, {"delivered", d.delivered}, {"detail", d.detail}};
}

void from_json(const json& j, DeliveryReport& d)
{
    d.target = j.value("target", "");
    d.delivered = j.at("delivered").get<bool>();
    d.detail = j.value("detail", "");
}

void to_json(json& j, const AdaptationState& s)
{
    j = json::object();
    if (s.maintenance) j["maintenance"] = *s.maintenance;
    if (s.circuit_open) j["circuit_open"] = *s.circuit_open;
    if (s.cache_enabled) j["cache_enabled"] = *s.cache_enabled;
    if (s.power_mode) j["power_mode"] = to_string(*s.power_mode);
    if (s.image_provider) j["image_provider"] = to_string(*s.image_provider);
    if (s.ddos_armed) j["ddos_armed"] = *s.ddos_armed;
}

void from_json(const json& j, AdaptationState& s)
{
    s = AdaptationState{};
    auto flag = [&j](const char* key, std::optional<bool>& out) {
        if (j.contains(key)) out = j.at(key).get<bool>();
    };
    flag("maintenance", s.maintenance);
    flag("circuit_open", s.circuit_open);
    flag("cache_enabled", s.cache_enabled);
    flag("ddos_armed", s.ddos_armed);
    if (j.contains("power_mode")) {
        auto v = j.at("power_mode").get<std::string>();
        if (v == "normal") s.power_mode = PowerMode::normal;
        else if (v == "low") s.power_mode = PowerMode::low;
        else throw std::invalid_argument("unknown power mode: " + v);
    }
    if (j.contains("image_provider")) {
        auto v = j.at("image_provider").get<std::string>();
        if (v == "local") s.image_provider = ImageProvider::local;
        else if (v == "external") s.image_provider = ImageProvider::external;
        else throw std::invalid_argument("unknown image provider: " + v);
    }
}

void to_json(json& j, const SubscriptionProgress& p)
{
    j = json{{"subscription", p.subscription},
             {"counted", p.counted},
             {"consecutive_hits", p.consecutive_hits},
             {"fired", p.fired}};
}

void from_json(const json& j, SubscriptionProgress& p)
{
    p.subscription = j.at("subscription").get<std::size_t>();
    p.counted = j.at("counted").get<bool>();
    p.consecutive_hits = j.at("consecutive_hits").get<int>();
    p.fired = j.at("fired").get<bool>();
}

void to_json(json& j, const TimelineEntry& e)
{
    j = json{{"seq", e.seq}, {"at", e.at}, {"kind", to_string(e.kind)}, {"name", e.name}, {"value", e.value}};
    if (!e.detail.empty()) j["detail"] = e.detail;
    if (!e.trigger.empty()) j["trigger"] = e.trigger;
    if (!e.progress.empty()) {
        j["progress"] = json::array();
        for (const auto& p : e.progress) {
            json pj;
            to_json(pj, p);
            j["progress"].push_back(std::move(pj));
        }
    }
}

void from_json(const json& j, TimelineEntry& e)
{
    e.seq = j.at("seq").get<std::uint64_t>();
    e.at = j.at("at").get<TimestampMs>();
    e.kind = entry_kind_from_string(j.at("kind").get<std::string>());
    e.name = j.at("name").get<std::string>();
    e.value = j.value("value", "");
    e.detail = j.value("detail", "");
    e.trigger = j.value("trigger", "");
    e.progress.clear();
    if (j.contains("progress")) {
        for (const auto& pj : j.at("progress")) {
            SubscriptionProgress p;
            from_json(pj, p);
            e.progress.push_back(p);
        }
    }
}

void to_json(json& j, const Request& r)
{
    j = json{{"at", r.at}, {"client_ip", r.client_ip}, {"path", r.path}};
}

void from_json(const json& j, Request& r)
{
    r.at = j.at("at").get<TimestampMs>();
    r.client_ip = j.value("client_ip", "");
    r.path = j.value("path", "/");
}

void to_json(json& j, const Response& r)
{
    j = json{{"status", to_string(r.status)}, {"body", r.body}, {"latency_ms", r.latency_ms}};
}

void from_json(const json& j, Response& r)
{
    r.status = response_class_from_string(j.at("status").get<std::string>());
    r.body = j.value("body", "");
    r.latency_ms = j.value("latency_ms", 0.0);
}

void to_json(json& j, const TickReport& r)
{
    j = json{{"node", r.node}, {"at", r.at}, {"on_demand", r.on_demand}};
    json deferred = json::array();
    for (const auto& o : r.deferred) {
        json oj;
        to_json(oj, o);
        deferred.push_back(std::move(oj));
    }
    j["deferred"] = std::move(deferred);
    json checks = json::array();
    for (const auto& c : r.checks) {
        json cj{{"event", c.event}, {"triggered", c.triggered}};
        to_json(cj["sample"], c.sample);
        cj["outcomes"] = json::array();
        for (const auto& o : c.outcomes) {
            json oj;
            to_json(oj, o);
            cj["outcomes"].push_back(std::move(oj));
        }
        if (!c.error.empty()) cj["error"] = c.error;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
}

json actions_document(const ServiceNode& node)
{
    json list = json::array();
    for (const auto& a : node.actions()) {
        list.push_back({{"id", a.id},
                        {"level", to_string(a.level)},
                        {"mode", to_string(a.mode)},
                        {"inverse", a.inverse}});
    }
    return {{"node", node.id()}, {"actions", std::move(list)}};
}

json events_document(const ServiceNode& node)
{
    json events = json::array();
    for (const auto& e : node.events()) {
        events.push_back({{"name", e.name}, {"collector", e.collector}, {"evaluator", e.evaluator}});
    }
    json subs = json::array();
    for (const auto& s : node.subscriptions()) {
        const auto& sub = s.subscription;
        subs.push_back({{"id", s.id},
                        {"event", sub.event_name},
                        {"actions", sub.actions},
                        {"filter", sub.filter ? json(sub.filter->id()) : json(nullptr)},
                        {"strategy", {{"threshold", sub.strategy.threshold},
                                      {"consecutive", sub.strategy.consecutive}}},
                        {"starts_latched", sub.starts_latched},
                        {"resets", sub.resets},
                        {"consecutive_hits", s.state.consecutive_hits},
                        {"fired", s.state.fired}});
    }
    return {{"node", node.id()}, {"events", std::move(events)}, {"subscriptions", std::move(subs)}};
}

json state_document(const ServiceNode& node)
{
    json state;
    to_json(state, node.state());
    json timeline = json::array();
    for (const auto& e : node.timeline()) {
        json ej;
        to_json(ej, e);
        timeline.push_back(std::move(ej));
    }
    return {{"node", node.id()},
            {"role", to_string(node.role())},
            {"state", std::move(state)},
            {"timeline", std::move(timeline)}};
}

std::string sample_digest(const MetricsSample& sample)
{
    json j;
    to_json(j, sample);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace adaptiflow
