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

#include "adaptiflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "adaptiflow/evaluators.hpp"
#include "adaptiflow/teastore/services.hpp"

namespace adaptiflow::scenario {

using nlohmann::json;

std::string_view to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::self_healing: return "self_healing";
    case ScenarioKind::self_protection: return "self_protection";
    case ScenarioKind::self_optimization: return "self_optimization";
    case ScenarioKind::custom: return "custom";
    }
    return "custom";
}

const NodeSpec* ScenarioSpec::find_node(const std::string& id) const
{
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

NodeSpec* ScenarioSpec::find_node(const std::string& id)
{
    for (auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

namespace {

// Typed field access with error paths.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw SchemaError(path_, "expected an object");
    }

    const std::string& path() const { return path_; }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const json& raw(const std::string& key) const
    {
        if (!has(key)) throw SchemaError(at(key), "missing field");
        return j_.at(key);
    }

    std::string str(const std::string& key) const
    {
        const auto& v = raw(key);
        if (!v.is_string()) throw SchemaError(at(key), "expected a string");
        return v.get<std::string>();
    }

    std::string str(const std::string& key, const std::string& fallback) const
    {
        return has(key) ? str(key) : fallback;
    }

    double num(const std::string& key) const
    {
        const auto& v = raw(key);
        if (!v.is_number()) throw SchemaError(at(key), "expected a number");
        return v.get<double>();
    }

    double num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

    std::int64_t integer(const std::string& key) const
    {
        const auto& v = raw(key);
        if (!v.is_number_integer()) throw SchemaError(at(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    bool boolean(const std::string& key, bool fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_boolean()) throw SchemaError(at(key), "expected a boolean");
        return v.get<bool>();
    }

    const json& array(const std::string& key) const
    {
        const auto& v = raw(key);
        if (!v.is_array()) throw SchemaError(at(key), "expected an array");
        return v;
    }

    std::vector<std::string> strings(const std::string& key) const
    {
        std::vector<std::string> out;
        if (!has(key)) return out;
        const auto& arr = array(key);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_string()) throw SchemaError(at(key) + "[" + std::to_string(i) + "]", "expected a string");
            out.push_back(arr[i].get<std::string>());
        }
        return out;
    }

    void only(std::initializer_list<const char*> allowed) const
    {
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [k, v] : j_.items()) {
            if (!ok.count(k)) throw SchemaError(at(k), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
};

std::string indexed(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

ScenarioKind kind_from(const std::string& s, const std::string& path)
{
    for (auto k : {ScenarioKind::self_healing, ScenarioKind::self_protection, ScenarioKind::self_optimization,
                   ScenarioKind::custom}) {
        if (to_string(k) == s) return k;
    }
    throw SchemaError(path, "unknown scenario kind '" + s + "'");
}

double finite_param(const EvaluatorSpec& spec, const std::string& key, const std::string& path,
                    std::optional<double> fallback = std::nullopt)
{
    auto it = spec.params.find(key);
    if (it == spec.params.end()) {
        if (fallback) return *fallback;
        throw InvalidThreshold(path + ".params." + key, "missing threshold");
    }
    if (!std::isfinite(it->second)) throw InvalidThreshold(path + ".params." + key, "not finite");
    return it->second;
}

double percent_param(const EvaluatorSpec& spec, const std::string& key, const std::string& path, double fallback)
{
    double v = finite_param(spec, key, path, fallback);
    if (v < 0.0 || v > 100.0) throw InvalidThreshold(path + ".params." + key, "percent outside [0, 100]");
    return v;
}

double non_negative_param(const EvaluatorSpec& spec, const std::string& key, const std::string& path,
                          double fallback)
{
    double v = finite_param(spec, key, path, fallback);
    if (v < 0.0) throw InvalidThreshold(path + ".params." + key, "negative threshold");
    return v;
}

void require_metric(const EvaluatorSpec& spec, const std::string& path)
{
    if (spec.metric.empty()) throw SchemaError(path + ".metric", "missing field");
}

}  // namespace

EvaluatorPtr make_evaluator(const EvaluatorSpec& spec, const std::string& path)
{
    const auto& t = spec.type;
    if (t == "GreaterThan" || t == "LessThan") {
        require_metric(spec, path);
        return std::make_shared<ThresholdEvaluator>(spec.id, spec.metric, comparison_from_string(t),
                                                    finite_param(spec, "bound", path));
    }
    if (t == "Between") {
        require_metric(spec, path);
        double lo = finite_param(spec, "lower", path);
        double hi = finite_param(spec, "upper", path);
        if (lo > hi) throw InvalidThreshold(path + ".params", "lower bound exceeds upper bound");
        return std::make_shared<ThresholdEvaluator>(spec.id, spec.metric, lo, hi);
    }
    if (t == "Flag") {
        require_metric(spec, path);
        return std::make_shared<FlagEvaluator>(spec.id, spec.metric, spec.expected.value_or(true));
    }
    if (t == "Constant") {
        return std::make_shared<ConstantEvaluator>(spec.id, spec.expected.value_or(false));
    }
    if (t == "UnHealthyDatabaseEvaluator") {
        return std::make_shared<UnhealthyDatabaseEvaluator>(
            spec.id, non_negative_param(spec, "response_limit_ms", path, 5000.0));
    }
    if (t == "HealthyDatabaseEvaluator") {
        return std::make_shared<HealthyDatabaseEvaluator>(
            spec.id, non_negative_param(spec, "response_limit_ms", path, 5000.0));
    }
    if (t == "DDoSEvaluator") {
        return std::make_shared<DdosEvaluator>(spec.id, non_negative_param(spec, "threshold_rps", path, 300.0));
    }
    if (t == "NonDDoSEvaluator") {
        return std::make_shared<NonDdosEvaluator>(spec.id, non_negative_param(spec, "threshold_rps", path, 300.0));
    }
    if (t == "IncreaseResourceUsageEvaluator") {
        return std::make_shared<IncreaseResourceUsageEvaluator>(spec.id, percent_param(spec, "cpu_high", path, 75.0),
                                                                percent_param(spec, "memory_high", path, 80.0));
    }
    if (t == "DecreaseResourceUsageEvaluator") {
        return std::make_shared<DecreaseResourceUsageEvaluator>(spec.id, percent_param(spec, "cpu_low", path, 60.0),
                                                                percent_param(spec, "memory_low", path, 60.0));
    }
    throw SchemaError(path + ".type", "unknown evaluator type '" + t + "'");
}

namespace {

const std::set<std::string> kCollectorTypes = {"LocalDatabaseMetricsCollector", "LocalRequestMetricsCollector",
                                               "ResourceUsageCollector"};

NotificationStrategy parse_strategy(const json& j, const std::string& path)
{
    if (j.is_string()) {
        if (j.get<std::string>() == "immediate") return NotificationStrategy::immediate();
        throw SchemaError(path, "unknown strategy '" + j.get<std::string>() + "'");
    }
    Reader r(j, path);
    r.only({"type", "n", "consecutive"});
    auto type = r.str("type");
    if (type == "immediate") return NotificationStrategy::immediate();
    if (type != "count") throw SchemaError(r.at("type"), "unknown strategy '" + type + "'");
    auto n = r.integer("n");
    if (n < 1) throw InvalidThreshold(r.at("n"), "count must be at least 1");
    return NotificationStrategy::count(static_cast<int>(n), r.boolean("consecutive", true));
}

NodeSpec parse_node(const json& j, const std::string& path)
{
    Reader r(j, path);
    r.only({"id", "role", "address", "collectors", "actions", "evaluators", "events", "subscriptions",
            "notifications", "observation", "resource_map", "resource_trajectory"});
    NodeSpec n;
    n.id = r.str("id");
    if (n.id.empty() || n.id.find(':') != std::string::npos) throw SchemaError(r.at("id"), "malformed node id");
    try {
        n.role = role_from_string(r.str("role", "custom"));
    } catch (const std::invalid_argument& ex) {
        throw SchemaError(r.at("role"), ex.what());
    }
    if (r.has("address")) n.address = r.str("address");

    if (r.has("collectors")) {
        const auto& arr = r.array("collectors");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader c(arr[i], indexed(r.at("collectors"), i));
            c.only({"id", "type", "window_ms"});
            CollectorSpec cs{c.str("id"), c.str("type"), std::nullopt};
            if (!kCollectorTypes.count(cs.type)) throw SchemaError(c.at("type"), "unknown collector type '" + cs.type + "'");
            if (c.has("window_ms")) {
                cs.window_ms = c.integer("window_ms");
                if (*cs.window_ms <= 0) throw InvalidThreshold(c.at("window_ms"), "window must be positive");
            }
            n.collectors.push_back(std::move(cs));
        }
    }

    auto builtin = teastore::builtin_action_ids(n.role);
    if (r.has("actions")) {
        n.actions = r.strings("actions");
        for (std::size_t i = 0; i < n.actions.size(); ++i) {
            if (std::find(builtin.begin(), builtin.end(), n.actions[i]) == builtin.end()) {
                throw UnresolvedReference(indexed(r.at("actions"), i), n.actions[i]);
            }
        }
    } else {
        n.actions = builtin;
    }

    if (r.has("evaluators")) {
        const auto& arr = r.array("evaluators");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string epath = indexed(r.at("evaluators"), i);
            Reader e(arr[i], epath);
            e.only({"id", "type", "metric", "params", "expected"});
            EvaluatorSpec es;
            es.id = e.str("id");
            es.type = e.str("type");
            es.metric = e.str("metric", "");
            if (e.has("params")) {
                Reader p(e.raw("params"), e.at("params"));
                for (const auto& [k, v] : e.raw("params").items()) {
                    es.params[k] = p.num(k);
                }
            }
            if (e.has("expected")) es.expected = e.boolean("expected", true);
            make_evaluator(es, epath);  // validates type and thresholds
            n.evaluators.push_back(std::move(es));
        }
    }

    auto evaluator_known = [&n](const std::string& id) {
        return std::any_of(n.evaluators.begin(), n.evaluators.end(), [&](const EvaluatorSpec& e) { return e.id == id; });
    };

    if (r.has("events")) {
        const auto& arr = r.array("events");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader e(arr[i], indexed(r.at("events"), i));
            e.only({"name", "collector", "evaluator"});
            EventSpec es{e.str("name"), e.str("collector"), e.str("evaluator")};
            bool collector_known = std::any_of(n.collectors.begin(), n.collectors.end(),
                                               [&](const CollectorSpec& c) { return c.id == es.collector; });
            if (!collector_known) throw UnresolvedReference(e.at("collector"), es.collector);
            if (!evaluator_known(es.evaluator)) throw UnresolvedReference(e.at("evaluator"), es.evaluator);
            for (const auto& other : n.events) {
                if (other.name == es.name) throw SchemaError(e.at("name"), "duplicate event name '" + es.name + "'");
            }
            n.events.push_back(std::move(es));
        }
    }

    if (r.has("notifications")) {
        const auto& arr = r.array("notifications");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader b(arr[i], indexed(r.at("notifications"), i));
            b.only({"event", "actions", "arm", "resets"});
            NotificationBinding nb;
            nb.event_name = b.str("event");
            nb.actions = b.strings("actions");
            if (b.has("arm")) nb.arm = b.boolean("arm", true);
            nb.resets = b.strings("resets");
            n.notifications.push_back(std::move(nb));
        }
    }

    if (r.has("subscriptions")) {
        const auto& arr = r.array("subscriptions");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader s(arr[i], indexed(r.at("subscriptions"), i));
            s.only({"event", "actions", "filter", "strategy", "starts_latched", "resets"});
            SubscriptionSpec ss;
            ss.event = s.str("event");
            ss.actions = s.strings("actions");
            if (ss.actions.empty()) throw SchemaError(s.at("actions"), "subscription needs at least one action");
            if (s.has("filter")) {
                ss.filter = s.str("filter");
                if (!evaluator_known(*ss.filter)) throw UnresolvedReference(s.at("filter"), *ss.filter);
            }
            ss.strategy = s.has("strategy") ? parse_strategy(s.raw("strategy"), s.at("strategy"))
                                            : NotificationStrategy::immediate();
            ss.starts_latched = s.boolean("starts_latched", false);
            ss.resets = s.strings("resets");
            n.subscriptions.push_back(std::move(ss));
        }
    }

    if (r.has("observation")) {
        Reader o(r.raw("observation"), r.at("observation"));
        o.only({"mode", "events", "failure_triggers", "interval_ms"});
        try {
            n.observation_mode = observation_mode_from_string(o.str("mode", "periodic"));
        } catch (const std::invalid_argument& ex) {
            throw SchemaError(o.at("mode"), ex.what());
        }
        n.observed_events = o.strings("events");
        n.failure_triggers = o.strings("failure_triggers");
        if (o.has("interval_ms")) {
            n.interval_ms = o.integer("interval_ms");
            if (*n.interval_ms <= 0) throw InvalidThreshold(o.at("interval_ms"), "interval must be positive");
        }
    }

    if (r.has("resource_map")) {
        Reader m(r.raw("resource_map"), r.at("resource_map"));
        m.only({"cpu_base", "cpu_per_rps", "memory_base", "memory_per_rps"});
        teastore::ResourceMap map;
        map.cpu_base = m.num("cpu_base", map.cpu_base);
        map.cpu_per_rps = m.num("cpu_per_rps", map.cpu_per_rps);
        map.memory_base = m.num("memory_base", map.memory_base);
        map.memory_per_rps = m.num("memory_per_rps", map.memory_per_rps);
        if (map.cpu_per_rps < 0 || map.memory_per_rps < 0) {
            throw InvalidThreshold(r.at("resource_map"), "load coefficients must be non-negative");
        }
        n.resource_map = map;
    }

    if (r.has("resource_trajectory")) {
        const auto& arr = r.array("resource_trajectory");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto p = indexed(r.at("resource_trajectory"), i);
            const auto& pt = arr[i];
            if (!pt.is_array() || pt.size() != 3 || !pt[0].is_number() || !pt[1].is_number() || !pt[2].is_number()) {
                throw SchemaError(p, "expected [time_s, cpu, memory]");
            }
            teastore::ResourcePoint rp{pt[0].get<double>(), pt[1].get<double>(), pt[2].get<double>()};
            if (!n.resource_trajectory.empty() && !(rp.time_s > n.resource_trajectory.back().time_s)) {
                throw SchemaError(p, "time must be strictly increasing");
            }
            n.resource_trajectory.push_back(rp);
        }
    }
    return n;
}

// Cross-references that need the whole node: events named by subscriptions,
// resets and observation, and local action ids.
void resolve_node(const NodeSpec& n, const std::string& path, const std::set<std::string>& node_ids)
{
    auto event_known = [&n](const std::string& name) {
        return std::any_of(n.events.begin(), n.events.end(), [&](const EventSpec& e) { return e.name == name; });
    };
    auto bound = [&n](const std::string& name) {
        return std::any_of(n.notifications.begin(), n.notifications.end(),
                           [&](const NotificationBinding& b) { return b.event_name == name; });
    };
    auto check_action = [&](const std::string& ref, const std::string& p) {
        auto colon = ref.find(':');
        if (colon == std::string::npos) {
            if (std::find(n.actions.begin(), n.actions.end(), ref) == n.actions.end()) {
                throw UnresolvedReference(p, ref);
            }
            return;
        }
        auto peer = ref.substr(0, colon);
        if (!node_ids.count(peer) || peer == n.id) throw UnresolvedReference(p, ref);
    };

    for (std::size_t i = 0; i < n.subscriptions.size(); ++i) {
        const auto& s = n.subscriptions[i];
        auto sp = indexed(path + ".subscriptions", i);
        if (!event_known(s.event) && !bound(s.event)) throw UnresolvedReference(sp + ".event", s.event);
        for (std::size_t k = 0; k < s.actions.size(); ++k) check_action(s.actions[k], indexed(sp + ".actions", k));
        for (std::size_t k = 0; k < s.resets.size(); ++k) {
            if (!event_known(s.resets[k]) && !bound(s.resets[k])) {
                throw UnresolvedReference(indexed(sp + ".resets", k), s.resets[k]);
            }
        }
    }
    for (std::size_t i = 0; i < n.notifications.size(); ++i) {
        const auto& b = n.notifications[i];
        auto bp = indexed(path + ".notifications", i);
        for (std::size_t k = 0; k < b.actions.size(); ++k) check_action(b.actions[k], indexed(bp + ".actions", k));
        for (std::size_t k = 0; k < b.resets.size(); ++k) {
            if (!event_known(b.resets[k]) && !bound(b.resets[k])) {
                throw UnresolvedReference(indexed(bp + ".resets", k), b.resets[k]);
            }
        }
    }
    for (std::size_t i = 0; i < n.observed_events.size(); ++i) {
        if (!event_known(n.observed_events[i])) {
            throw UnresolvedReference(indexed(path + ".observation.events", i), n.observed_events[i]);
        }
    }
    for (std::size_t i = 0; i < n.failure_triggers.size(); ++i) {
        if (!event_known(n.failure_triggers[i])) {
            throw UnresolvedReference(indexed(path + ".observation.failure_triggers", i), n.failure_triggers[i]);
        }
    }
}

const std::set<std::string> kAssertionTypes = {"action_within", "state_within", "notification_within",
                                               "final_state",   "action_count", "no_actions",
                                               "no_state_change", "confirmations", "never_fires"};

AssertionSpec parse_assertion(const json& j, const std::string& path, const ScenarioSpec& spec)
{
    Reader r(j, path);
    r.only({"type", "node", "action", "flag", "value", "event", "from_s", "to_s", "count"});
    AssertionSpec a;
    a.type = r.str("type");
    if (!kAssertionTypes.count(a.type)) throw SchemaError(r.at("type"), "unknown assertion type '" + a.type + "'");
    a.node = r.str("node");
    if (a.node != "*" && !spec.find_node(a.node)) throw UnresolvedReference(r.at("node"), a.node);
    a.action = r.str("action", "");
    a.flag = r.str("flag", "");
    a.value = r.str("value", "");
    a.event = r.str("event", "");
    if (r.has("from_s")) a.from_s = r.num("from_s");
    if (r.has("to_s")) a.to_s = r.num("to_s");
    if (r.has("count")) a.count = static_cast<int>(r.integer("count"));

    auto need = [&](bool ok, const char* field) {
        if (!ok) throw SchemaError(r.at(field), "required for " + a.type);
    };
    if (a.type == "action_within" || a.type == "action_count") need(!a.action.empty(), "action");
    if (a.type == "action_count") need(a.count.has_value(), "count");
    if (a.type == "state_within" || a.type == "final_state") {
        need(!a.flag.empty(), "flag");
        need(!a.value.empty(), "value");
    }
    if (a.type == "notification_within" || a.type == "confirmations" || a.type == "never_fires") {
        need(!a.event.empty(), "event");
    }
    if (a.type == "confirmations") need(a.count.has_value(), "count");
    if (a.type.ends_with("_within") || a.type == "no_state_change") {
        need(a.from_s.has_value(), "from_s");
        need(a.to_s.has_value(), "to_s");
        if (*a.from_s > *a.to_s) throw SchemaError(path, "from_s exceeds to_s");
    }
    return a;
}

}  // namespace

ScenarioSpec load_scenario(const json& document, const std::filesystem::path& base_dir)
{
    Reader r(document, "");
    r.only({"$schema", "name", "kind", "description", "interval_ms", "horizon_s", "seed", "entry_node", "profile",
            "nodes", "faults", "assertions"});
    ScenarioSpec spec;
    spec.name = r.str("name");
    spec.kind = kind_from(r.str("kind", "custom"), "kind");
    spec.description = r.str("description", "");
    if (r.has("interval_ms")) {
        spec.interval_ms = r.integer("interval_ms");
        if (spec.interval_ms <= 0) throw InvalidThreshold("interval_ms", "interval must be positive");
    }
    spec.horizon_s = r.num("horizon_s", spec.horizon_s);
    if (!(spec.horizon_s > 0)) throw SchemaError("horizon_s", "horizon must be positive");
    if (r.has("seed")) {
        const auto& s = r.raw("seed");
        if (!s.is_number_unsigned()) throw SchemaError("seed", "expected a non-negative integer");
        spec.seed = s.get<std::uint64_t>();
    }
    spec.entry_node = r.str("entry_node", spec.entry_node);

    if (r.has("profile")) {
        const auto& p = r.raw("profile");
        if (p.is_string()) {
            std::filesystem::path file = p.get<std::string>();
            spec.profile_path = file.string();
            if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
            try {
                spec.profile = loadgen::LoadProfile::load(file);
            } catch (const std::exception& ex) {
                throw UnresolvedReference("profile", std::string(p.get<std::string>()) + " (" + ex.what() + ")");
            }
        } else {
            Reader pr(p, "profile");
            pr.only({"name", "points"});
            std::vector<loadgen::ProfilePoint> points;
            const auto& arr = pr.array("points");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const auto& pt = arr[i];
                if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
                    throw SchemaError(indexed("profile.points", i), "expected [time_s, arrivals_per_s]");
                }
                points.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
            try {
                spec.profile = loadgen::LoadProfile(pr.str("name", "inline"), std::move(points));
            } catch (const std::invalid_argument& ex) {
                throw SchemaError("profile.points", ex.what());
            }
        }
    }

    const auto& nodes = r.array("nodes");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto n = parse_node(nodes[i], indexed("nodes", i));
        if (!ids.insert(n.id).second) throw SchemaError(indexed("nodes", i) + ".id", "duplicate node id '" + n.id + "'");
        spec.nodes.push_back(std::move(n));
    }
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) resolve_node(spec.nodes[i], indexed("nodes", i), ids);
    if (spec.profile && !ids.count(spec.entry_node)) throw UnresolvedReference("entry_node", spec.entry_node);

    if (r.has("faults")) {
        const auto& arr = r.array("faults");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader f(arr[i], indexed("faults", i));
            f.only({"time_s", "target", "kind", "param"});
            FaultSpec fs;
            fs.time_s = f.num("time_s");
            if (fs.time_s < 0) throw SchemaError(f.at("time_s"), "negative fault time");
            fs.target = f.str("target");
            const NodeSpec* target = spec.find_node(fs.target);
            if (!target) throw UnresolvedReference(f.at("target"), fs.target);
            if (target->role != ServiceRole::persistence) {
                throw SchemaError(f.at("target"), "only a persistence node has a database to fault");
            }
            try {
                fs.fault.kind = teastore::fault_kind_from_string(f.str("kind"));
            } catch (const std::invalid_argument& ex) {
                throw SchemaError(f.at("kind"), ex.what());
            }
            fs.fault.latency_ms = f.num("param", 0.0);
            if (fs.fault.kind == teastore::Fault::Kind::slow && fs.fault.latency_ms < 0) {
                throw InvalidThreshold(f.at("param"), "negative latency");
            }
            spec.faults.push_back(fs);
        }
        std::stable_sort(spec.faults.begin(), spec.faults.end(),
                         [](const FaultSpec& a, const FaultSpec& b) { return a.time_s < b.time_s; });
    }

    if (r.has("assertions")) {
        const auto& arr = r.array("assertions");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            spec.assertions.push_back(parse_assertion(arr[i], indexed("assertions", i), spec));
        }
    }
    return spec;
}

ScenarioSpec load_scenario_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ScenarioError(path.string(), "cannot open scenario file");
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw SchemaError(path.string(), ex.what());
    }
    return load_scenario(document, path.parent_path());
}

}  // namespace adaptiflow::scenario
