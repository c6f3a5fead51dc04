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

#include "adaptiflow/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "adaptiflow/collectors.hpp"
#include "adaptiflow/http.hpp"
#include "adaptiflow/scheduler.hpp"
#include "adaptiflow/teastore/services.hpp"
#include "adaptiflow/transport.hpp"
#include "adaptiflow/wire.hpp"

namespace adaptiflow::scenario {

using nlohmann::json;

std::string_view to_string(TransportKind kind)
{
    return kind == TransportKind::loopback ? "loopback" : "socket";
}

std::vector<FlagChange> NodeReport::transitions() const
{
    std::vector<FlagChange> out;
    for (const auto& e : timeline) {
        if (e.kind == EntryKind::transition) out.push_back({e.name, e.detail, e.value});
    }
    return out;
}

bool ScenarioReport::passed() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](const AssertionResult& a) { return a.passed; });
}

const NodeReport* ScenarioReport::node(const std::string& id) const
{
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

namespace {

TimestampMs to_ms(double seconds) { return static_cast<TimestampMs>(std::llround(seconds * 1000.0)); }

struct Mesh {
    std::vector<std::unique_ptr<ServiceNode>> nodes;  // node-id order
    LoopbackTransport loopback;
    std::unique_ptr<SocketTransport> sockets;
    std::vector<std::unique_ptr<NodeServer>> servers;

    ServiceNode* find(const std::string& id)
    {
        for (auto& n : nodes) {
            if (n->id() == id) return n.get();
        }
        return nullptr;
    }

    ~Mesh()
    {
        for (auto& s : servers) s->stop();
    }
};

std::unique_ptr<ServiceNode> build_node(const NodeSpec& spec, const Clock& clock, TimestampMs interval_ms,
                                        bool interval_forced)
{
    teastore::ServiceOptions options;
    options.register_builtin_actions = false;
    for (const auto& c : spec.collectors) {
        if (c.type == "LocalRequestMetricsCollector" && c.window_ms) options.request_window_ms = *c.window_ms;
    }
    if (spec.resource_map) options.resources = *spec.resource_map;

    auto node = teastore::make_service(spec.id, spec.role, clock, options);
    const auto& sim = node->sim();
    if (!spec.resource_trajectory.empty()) sim.resources->set_trajectory(spec.resource_trajectory);

    for (const auto& a : spec.actions) node->register_action(teastore::make_builtin_action(spec.role, a));

    for (const auto& c : spec.collectors) {
        if (c.type == "LocalDatabaseMetricsCollector") {
            if (!sim.database) throw ScenarioError(spec.id, "collector " + c.id + " needs a database");
            node->register_collector(std::make_unique<LocalDatabaseMetricsCollector>(sim.database, c.id));
        } else if (c.type == "LocalRequestMetricsCollector") {
            node->register_collector(std::make_unique<LocalRequestMetricsCollector>(sim.traffic, c.id));
        } else {
            node->register_collector(std::make_unique<ResourceUsageCollector>(sim.resources, c.id));
        }
    }

    std::map<std::string, EvaluatorPtr> evaluators;
    for (const auto& e : spec.evaluators) evaluators[e.id] = make_evaluator(e, spec.id + "." + e.id);

    for (const auto& e : spec.events) node->register_event({e.name, e.collector, evaluators.at(e.evaluator)});
    for (const auto& b : spec.notifications) node->bind_notification(b);
    for (const auto& s : spec.subscriptions) {
        Subscription sub;
        sub.event_name = s.event;
        sub.actions = s.actions;
        if (s.filter) sub.filter = evaluators.at(*s.filter);
        sub.strategy = s.strategy;
        sub.starts_latched = s.starts_latched;
        sub.resets = s.resets;
        node->subscribe(std::move(sub));
    }

    ObservationConfig obs;
    obs.mode = spec.observation_mode;
    obs.interval_ms = (!interval_forced && spec.interval_ms) ? *spec.interval_ms : interval_ms;
    obs.observed_events = spec.observed_events;
    obs.failure_triggers = spec.failure_triggers;
    node->set_observation(std::move(obs));
    return node;
}

void wire_mesh(Mesh& mesh, const ScenarioSpec& spec, TransportKind kind)
{
    if (kind == TransportKind::loopback) {
        for (auto& n : mesh.nodes) mesh.loopback.serve(*n);
    } else {
        mesh.sockets = std::make_unique<SocketTransport>();
        for (auto& n : mesh.nodes) {
            std::string host = "127.0.0.1";
            int port = 0;
            if (const NodeSpec* ns = spec.find_node(n->id()); ns && ns->address) {
                auto colon = ns->address->rfind(':');
                host = ns->address->substr(0, colon);
                port = colon == std::string::npos ? 0 : std::stoi(ns->address->substr(colon + 1));
            }
            auto server = std::make_unique<NodeServer>(*n, host, port);
            server->start();
            n->set_transport(mesh.sockets.get());
            n->set_address(server->address());
            mesh.servers.push_back(std::move(server));
        }
    }
    for (auto& n : mesh.nodes) {
        for (auto& peer : mesh.nodes) {
            if (peer.get() != n.get()) n->add_peer(peer->id(), peer->address());
        }
    }
}

Transport& transport_of(Mesh& mesh, TransportKind kind)
{
    if (kind == TransportKind::loopback) return mesh.loopback;
    return *mesh.sockets;
}

// Faults and load, fed in time order ahead of each batch of ticks.
class Feeder {
public:
    Feeder(const ScenarioSpec& spec, Mesh& mesh, Transport& transport, std::optional<loadgen::LoadDriver> driver,
           TimestampMs horizon_ms)
        : spec_(spec), mesh_(mesh), transport_(transport), driver_(std::move(driver)), horizon_ms_(horizon_ms)
    {
        if (ServiceNode* entry = mesh_.find(spec.entry_node)) entry_address_ = entry->address();
    }

    void advance(TimestampMs t)
    {
        t = std::min(t, horizon_ms_);
        while (next_fault_ < spec_.faults.size() && to_ms(spec_.faults[next_fault_].time_s) <= t) {
            const auto& f = spec_.faults[next_fault_++];
            TimestampMs at = to_ms(f.time_s);
            deliver(at, false);
            ServiceNode* target = mesh_.find(f.target);
            if (!target || !target->sim().database) continue;
            target->sim().database->inject_fault(f.fault);
            std::string text = "fault " + std::string(teastore::to_string(f.fault.kind));
            if (f.fault.kind == teastore::Fault::Kind::slow) text += " " + std::to_string(f.fault.latency_ms) + " ms";
            target->note(at, text);
        }
        deliver(t, true);
    }

    std::map<std::string, std::uint64_t> request_counts() const
    {
        std::map<std::string, std::uint64_t> counts{{"total", 0}};
        if (!driver_) return counts;
        for (const auto& e : driver_->log()) {
            ++counts[std::string(to_string(e.response))];
            ++counts["total"];
        }
        return counts;
    }

private:
    void deliver(TimestampMs until, bool inclusive)
    {
        if (!driver_) return;
        if (entry_address_.empty()) {
            // Entry node excluded from the mesh: the load has nowhere to go.
            return;
        }
        driver_->deliver_until(transport_, entry_address_, until, inclusive);
    }

    const ScenarioSpec& spec_;
    Mesh& mesh_;
    Transport& transport_;
    std::optional<loadgen::LoadDriver> driver_;
    TimestampMs horizon_ms_;
    std::size_t next_fault_ = 0;
    std::string entry_address_;
};

std::string seconds_text(double s)
{
    std::ostringstream out;
    out << s;
    return out.str();
}

std::string describe(const AssertionSpec& a)
{
    std::string window;
    if (a.from_s && a.to_s) window = " within [" + seconds_text(*a.from_s) + ", " + seconds_text(*a.to_s) + "] s";
    if (a.type == "action_within") return a.node + ": " + a.action + " applied" + window;
    if (a.type == "state_within") return a.node + ": " + a.flag + " -> " + a.value + window;
    if (a.type == "notification_within") return a.node + ": receives " + a.event + window;
    if (a.type == "final_state") return a.node + ": " + a.flag + " ends " + a.value;
    if (a.type == "action_count") return a.node + ": " + a.action + " applied " + std::to_string(*a.count) + "x";
    if (a.type == "no_actions") return a.node + ": no actions";
    if (a.type == "no_state_change") return a.node + ": no state change" + window;
    if (a.type == "confirmations") {
        return a.node + ": " + a.event + " fires after exactly " + std::to_string(*a.count) + " confirmations";
    }
    if (a.type == "never_fires") return a.node + ": " + a.event + " never fires";
    return a.node + ": " + a.type;
}

bool in_window(const TimelineEntry& e, const AssertionSpec& a)
{
    return (!a.from_s || e.at >= to_ms(*a.from_s)) && (!a.to_s || e.at <= to_ms(*a.to_s));
}

// Empty string on success, otherwise why the node fails the predicate.
std::string check_node(const AssertionSpec& a, const NodeReport& n)
{
    auto count_if = [&n](auto pred) {
        return std::count_if(n.timeline.begin(), n.timeline.end(), pred);
    };

    if (a.type == "action_within") {
        auto hits = count_if([&](const TimelineEntry& e) {
            return e.kind == EntryKind::action && e.name == a.action && e.value == "applied" && in_window(e, a);
        });
        return hits > 0 ? "" : "no applied " + a.action + " in window";
    }
    if (a.type == "state_within") {
        auto hits = count_if([&](const TimelineEntry& e) {
            return e.kind == EntryKind::transition && e.name == a.flag && e.value == a.value && in_window(e, a);
        });
        return hits > 0 ? "" : "no transition of " + a.flag + " to " + a.value + " in window";
    }
    if (a.type == "notification_within") {
        auto hits = count_if([&](const TimelineEntry& e) {
            return e.kind == EntryKind::notification && e.name == a.event && in_window(e, a);
        });
        return hits > 0 ? "" : "no " + a.event + " notification in window";
    }
    if (a.type == "final_state") {
        auto flags = n.final_state.flags();
        auto it = flags.find(a.flag);
        std::string actual = it == flags.end() ? "<absent>" : it->second;
        return actual == a.value ? "" : a.flag + " is " + actual;
    }
    if (a.type == "action_count") {
        auto hits = count_if([&](const TimelineEntry& e) {
            return e.kind == EntryKind::action && e.name == a.action && e.value == "applied";
        });
        return hits == *a.count ? "" : "applied " + std::to_string(hits) + " times";
    }
    if (a.type == "no_actions") {
        auto hits = count_if([](const TimelineEntry& e) { return e.kind == EntryKind::action; });
        return hits == 0 ? "" : std::to_string(hits) + " action entries";
    }
    if (a.type == "no_state_change") {
        auto hits = count_if([&](const TimelineEntry& e) { return e.kind == EntryKind::transition && in_window(e, a); });
        return hits == 0 ? "" : std::to_string(hits) + " transitions in window";
    }
    if (a.type == "never_fires") {
        for (const auto& e : n.timeline) {
            if (e.kind != EntryKind::check || e.name != a.event) continue;
            for (const auto& p : e.progress) {
                if (p.fired) return "fired at " + std::to_string(e.at) + " ms";
            }
        }
        return "";
    }
    if (a.type == "confirmations") {
        // Per-subscription history of counted flags, in check order.
        std::map<std::size_t, std::vector<bool>> counted;
        for (const auto& e : n.timeline) {
            if (e.kind != EntryKind::check || e.name != a.event) continue;
            for (const auto& p : e.progress) {
                auto& history = counted[p.subscription];
                history.push_back(p.counted);
                if (!p.fired) continue;
                const auto want = static_cast<std::size_t>(*a.count);
                if (p.consecutive_hits != *a.count) {
                    return "fired at " + std::to_string(e.at) + " ms after " + std::to_string(p.consecutive_hits) +
                           " confirmations";
                }
                if (history.size() < want) return "fired before enough checks";
                for (std::size_t k = history.size() - want; k < history.size(); ++k) {
                    if (!history[k]) return "confirmations were not consecutive";
                }
                if (history.size() > want && history[history.size() - want - 1]) {
                    return "streak longer than " + std::to_string(want) + " before firing";
                }
                return "";
            }
        }
        return "never fired";
    }
    return "unknown assertion type";
}

bool node_has_event_checks(const NodeReport& n, const std::string& event)
{
    return std::any_of(n.timeline.begin(), n.timeline.end(),
                       [&](const TimelineEntry& e) { return e.kind == EntryKind::check && e.name == event; });
}

}  // namespace

AssertionResult evaluate_assertion(const AssertionSpec& a, const ScenarioReport& report)
{
    AssertionResult result{describe(a), true, {}};
    std::vector<const NodeReport*> targets;
    if (a.node == "*") {
        for (const auto& n : report.nodes) {
            bool event_scoped = a.type == "confirmations";
            if (event_scoped && !node_has_event_checks(n, a.event)) continue;
            targets.push_back(&n);
        }
    } else if (const NodeReport* n = report.node(a.node)) {
        targets.push_back(n);
    }
    if (targets.empty()) {
        result.passed = false;
        result.detail = "no matching node in report";
        return result;
    }
    for (const auto* n : targets) {
        auto why = check_node(a, *n);
        if (!why.empty()) {
            result.passed = false;
            if (!result.detail.empty()) result.detail += "; ";
            result.detail += n->id + ": " + why;
        }
    }
    return result;
}

ScenarioReport run_scenario(const ScenarioSpec& spec, const RunOptions& options)
{
    const double horizon_s = options.horizon_s.value_or(spec.horizon_s);
    const std::uint64_t seed = options.seed.value_or(spec.seed);
    const TimestampMs interval_ms = options.interval_ms.value_or(spec.interval_ms);
    const TransportKind kind = options.live ? TransportKind::socket : options.transport;
    const TimestampMs horizon_ms = to_ms(horizon_s);
    if (horizon_ms <= 0) throw std::invalid_argument("horizon must be positive");
    if (interval_ms <= 0) throw std::invalid_argument("interval must be positive");

    std::optional<loadgen::LoadProfile> profile = options.profile ? options.profile : spec.profile;

    VirtualClock virtual_clock;
    SystemClock system_clock(options.time_scale);
    const Clock& clock = options.live ? static_cast<const Clock&>(system_clock) : virtual_clock;

    Mesh mesh;
    {
        std::vector<const NodeSpec*> specs;
        for (const auto& n : spec.nodes) {
            if (std::find(options.exclude_nodes.begin(), options.exclude_nodes.end(), n.id) ==
                options.exclude_nodes.end()) {
                specs.push_back(&n);
            }
        }
        std::sort(specs.begin(), specs.end(), [](const NodeSpec* a, const NodeSpec* b) { return a->id < b->id; });
        for (const auto* ns : specs) {
            mesh.nodes.push_back(build_node(*ns, clock, interval_ms, options.interval_ms.has_value()));
        }
    }
    wire_mesh(mesh, spec, kind);
    Transport& transport = transport_of(mesh, kind);

    std::optional<loadgen::LoadDriver> driver;
    if (profile) {
        int duration_s = static_cast<int>(std::ceil(horizon_s));
        driver.emplace(*profile, duration_s, seed);
    }
    Feeder feeder(spec, mesh, transport, std::move(driver), horizon_ms);

    ObservationScheduler scheduler(0);
    for (auto& n : mesh.nodes) scheduler.add(*n);

    if (!options.live) {
        scheduler.run(virtual_clock, horizon_ms, [&feeder](TimestampMs t) { feeder.advance(t); });
        if (virtual_clock.now() < horizon_ms) virtual_clock.advance_to(horizon_ms);
        feeder.advance(horizon_ms);
    } else {
        std::atomic<bool> stop{false};
        std::thread load([&] {
            // Feed in 100 ms logical steps.
            for (TimestampMs t = 100; t <= horizon_ms; t += 100) {
                std::this_thread::sleep_until(system_clock.wall_time_of(t));
                feeder.advance(t);
            }
        });
        scheduler.run_live(system_clock, horizon_ms, &stop);
        load.join();
    }

    ScenarioReport report;
    report.scenario = spec.name;
    report.seed = seed;
    report.horizon_s = horizon_s;
    report.interval_ms = interval_ms;
    report.transport = std::string(to_string(kind));
    report.live = options.live;
    report.profile = profile ? profile->name() : "";
    report.requests = feeder.request_counts();
    for (auto& n : mesh.nodes) report.nodes.push_back({n->id(), n->state(), n->timeline()});
    for (const auto& a : spec.assertions) report.assertions.push_back(evaluate_assertion(a, report));
    return report;
}

void to_json(json& j, const ScenarioReport& r)
{
    json nodes = json::array();
    for (const auto& n : r.nodes) {
        json state;
        adaptiflow::to_json(state, n.final_state);
        json timeline = json::array();
        for (const auto& e : n.timeline) {
            json ej;
            adaptiflow::to_json(ej, e);
            timeline.push_back(std::move(ej));
        }
        nodes.push_back({{"id", n.id}, {"final_state", std::move(state)}, {"timeline", std::move(timeline)}});
    }
    json assertions = json::array();
    for (const auto& a : r.assertions) {
        assertions.push_back({{"description", a.description}, {"passed", a.passed}, {"detail", a.detail}});
    }
    j = json{{"scenario", r.scenario},
             {"seed", r.seed},
             {"horizon_s", r.horizon_s},
             {"interval_ms", r.interval_ms},
             {"transport", r.transport},
             {"live", r.live},
             {"profile", r.profile},
             {"requests", r.requests},
             {"passed", r.passed()},
             {"assertions", std::move(assertions)},
             {"nodes", std::move(nodes)}};
}

void from_json(const json& j, ScenarioReport& r)
{
    r = ScenarioReport{};
    r.scenario = j.at("scenario").get<std::string>();
    r.seed = j.value("seed", std::uint64_t{0});
    r.horizon_s = j.value("horizon_s", 0.0);
    r.interval_ms = j.value("interval_ms", TimestampMs{0});
    r.transport = j.value("transport", "");
    r.live = j.value("live", false);
    r.profile = j.value("profile", "");
    r.requests = j.value("requests", std::map<std::string, std::uint64_t>{});
    for (const auto& aj : j.value("assertions", json::array())) {
        r.assertions.push_back({aj.at("description").get<std::string>(), aj.at("passed").get<bool>(),
                                aj.value("detail", "")});
    }
    for (const auto& nj : j.at("nodes")) {
        NodeReport n;
        n.id = nj.at("id").get<std::string>();
        adaptiflow::from_json(nj.at("final_state"), n.final_state);
        for (const auto& ej : nj.at("timeline")) {
            TimelineEntry e;
            adaptiflow::from_json(ej, e);
            n.timeline.push_back(std::move(e));
        }
        r.nodes.push_back(std::move(n));
    }
}

std::string report_document(const ScenarioReport& report)
{
    json j;
    to_json(j, report);
    return j.dump(2) + "\n";
}

void print_timeline(std::ostream& out, const ScenarioReport& report)
{
    struct Row {
        TimestampMs at;
        std::uint64_t seq;
        std::string node;
        const TimelineEntry* e;
    };
    std::vector<Row> rows;
    for (const auto& n : report.nodes) {
        for (const auto& e : n.timeline) {
            if (is_adaptation(e)) rows.push_back({e.at, e.seq, n.id, &e});
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.at != b.at ? a.at < b.at : a.node < b.node; });

    out << std::left << std::setw(10) << "time_s" << std::setw(13) << "node" << std::setw(13) << "kind"
        << std::setw(34) << "name" << std::setw(18) << "value" << "detail\n";
    for (const auto& r : rows) {
        std::ostringstream t;
        t << std::fixed << std::setprecision(3) << static_cast<double>(r.at) / 1000.0;
        std::string detail = r.e->detail;
        if (!r.e->trigger.empty() && r.e->kind != EntryKind::delivery) {
            detail = (detail.empty() ? "" : detail + " ") + "[" + r.e->trigger + "]";
        }
        out << std::left << std::setw(10) << t.str() << std::setw(13) << r.node << std::setw(13)
            << to_string(r.e->kind) << std::setw(34) << r.e->name << std::setw(18) << r.e->value << detail << "\n";
    }
    out << "requests:";
    for (const auto& [k, v] : report.requests) out << " " << k << "=" << v;
    out << "\n";
    for (const auto& a : report.assertions) {
        out << (a.passed ? "PASS " : "FAIL ") << a.description;
        if (!a.passed && !a.detail.empty()) out << " (" << a.detail << ")";
        out << "\n";
    }
}

namespace {

bool same_entry(const TimelineEntry& a, const TimelineEntry& b)
{
    return a.at == b.at && a.kind == b.kind && a.name == b.name && a.value == b.value && a.detail == b.detail &&
           a.trigger == b.trigger;
}

std::vector<TimelineEntry> adaptation_entries(const NodeReport& n)
{
    std::vector<TimelineEntry> out;
    for (const auto& e : n.timeline) {
        if (is_adaptation(e)) out.push_back(e);
    }
    return out;
}

}  // namespace

TimelineDiff diff_timelines(const ScenarioReport& a, const ScenarioReport& b)
{
    TimelineDiff diff;
    std::set<std::string> ids;
    for (const auto& n : a.nodes) ids.insert(n.id);
    for (const auto& n : b.nodes) ids.insert(n.id);

    for (const auto& id : ids) {
        const NodeReport* na = a.node(id);
        const NodeReport* nb = b.node(id);
        if (!na || !nb) {
            diff.missing_nodes.push_back(id);
            continue;
        }
        auto ea = adaptation_entries(*na);
        auto eb = adaptation_entries(*nb);
        const std::size_t m = ea.size();
        const std::size_t k = eb.size();
        std::vector<std::vector<std::uint32_t>> lcs(m + 1, std::vector<std::uint32_t>(k + 1, 0));
        for (std::size_t i = m; i-- > 0;) {
            for (std::size_t j = k; j-- > 0;) {
                lcs[i][j] = same_entry(ea[i], eb[j]) ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
            }
        }
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < m || j < k) {
            if (i < m && j < k && same_entry(ea[i], eb[j])) {
                ++i;
                ++j;
            } else if (j == k || (i < m && lcs[i + 1][j] >= lcs[i][j + 1])) {
                diff.items.push_back({id, true, ea[i++]});
            } else {
                diff.items.push_back({id, false, eb[j++]});
            }
        }

        auto fa = na->final_state.flags();
        auto fb = nb->final_state.flags();
        std::set<std::string> flags;
        for (const auto& [f, v] : fa) flags.insert(f);
        for (const auto& [f, v] : fb) flags.insert(f);
        for (const auto& f : flags) {
            std::string va = fa.count(f) ? fa.at(f) : "";
            std::string vb = fb.count(f) ? fb.at(f) : "";
            if (va != vb) diff.final_state.push_back({id, f, va, vb});
        }
    }
    return diff;
}

json to_json(const TimelineDiff& diff)
{
    json items = json::array();
    for (const auto& it : diff.items) {
        json ej;
        adaptiflow::to_json(ej, it.entry);
        ej.erase("seq");
        items.push_back({{"node", it.node}, {"side", it.in_a ? "a" : "b"}, {"entry", std::move(ej)}});
    }
    json finals = json::array();
    for (const auto& f : diff.final_state) {
        finals.push_back({{"node", f.node}, {"flag", f.flag}, {"a", f.a}, {"b", f.b}});
    }
    return {{"identical", diff.empty()},
            {"items", std::move(items)},
            {"final_state", std::move(finals)},
            {"missing_nodes", diff.missing_nodes}};
}

}  // namespace adaptiflow::scenario
