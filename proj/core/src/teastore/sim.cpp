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

#include "adaptiflow/teastore/sim.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace adaptiflow::teastore {

std::string_view to_string(Fault::Kind kind)
{
    switch (kind) {
    case Fault::Kind::down: return "down";
    case Fault::Kind::up: return "up";
    case Fault::Kind::slow: return "slow";
    }
    return "down";
}

Fault::Kind fault_kind_from_string(std::string_view name)
{
    if (name == "down") return Fault::Kind::down;
    if (name == "up") return Fault::Kind::up;
    if (name == "slow") return Fault::Kind::slow;
    throw std::invalid_argument("unknown fault kind: " + std::string(name));
}

SimDatabase::SimDatabase(Options options)
    : options_(options), latency_ms_(options.base_latency_ms),
      active_connections_(options.active_connections)
{
}

void SimDatabase::inject_fault(const Fault& fault)
{
    std::lock_guard lock(mutex_);
    switch (fault.kind) {
    case Fault::Kind::down:
        up_ = false;
        break;
    case Fault::Kind::up:
        up_ = true;
        latency_ms_ = options_.base_latency_ms;
        pending_queries_ = 0;
        break;
    case Fault::Kind::slow:
        if (fault.latency_ms < 0) throw std::invalid_argument("negative latency");
        latency_ms_ = fault.latency_ms;
        break;
    }
}

void SimDatabase::set_connections(std::int64_t active, std::int64_t pending)
{
    std::lock_guard lock(mutex_);
    active_connections_ = active;
    pending_queries_ = pending;
}

DatabaseProbe SimDatabase::probe() const
{
    std::lock_guard lock(mutex_);
    DatabaseProbe p;
    p.network_ok = up_;
    p.response_time_ms = up_ ? latency_ms_ : options_.timeout_ms;
    p.active_connections = up_ ? active_connections_ : 0;
    p.pending_queries = pending_queries_;
    return p;
}

bool SimDatabase::up() const
{
    std::lock_guard lock(mutex_);
    return up_;
}

std::optional<std::string> SimDatabase::query(std::string_view key)
{
    std::lock_guard lock(mutex_);
    if (!up_) {
        ++pending_queries_;
        return std::nullopt;
    }
    return "row:" + std::string(key);
}

double TrafficSnapshot::rate_per_s() const
{
    return window_ms > 0 ? static_cast<double>(requests) / (static_cast<double>(window_ms) / 1000.0) : 0.0;
}

double TrafficSnapshot::error_rate() const
{
    return requests > 0 ? static_cast<double>(errors) / static_cast<double>(requests) : 0.0;
}

TrafficWindow::TrafficWindow(TimestampMs window_ms) : window_ms_(window_ms)
{
    if (window_ms <= 0) throw std::invalid_argument("window must be positive");
}

void TrafficWindow::record(TimestampMs at, std::string_view client_ip, bool error)
{
    std::lock_guard lock(mutex_);
    Arrival a{at, std::string(client_ip), error};
    if (arrivals_.empty() || arrivals_.back().at <= at) {
        arrivals_.push_back(std::move(a));
    } else {
        auto pos = std::upper_bound(arrivals_.begin(), arrivals_.end(), at,
                                    [](TimestampMs t, const Arrival& x) { return t < x.at; });
        arrivals_.insert(pos, std::move(a));
    }
    latest_ = std::max(latest_, at);
    // Keep two windows so snapshots slightly behind the newest arrival stay exact.
    while (!arrivals_.empty() && arrivals_.front().at <= latest_ - 2 * window_ms_) {
        arrivals_.pop_front();
    }
}

TrafficSnapshot TrafficWindow::snapshot(TimestampMs now) const
{
    std::lock_guard lock(mutex_);
    auto first = std::upper_bound(arrivals_.begin(), arrivals_.end(), now - window_ms_,
                                  [](TimestampMs t, const Arrival& x) { return t < x.at; });
    auto last = std::upper_bound(arrivals_.begin(), arrivals_.end(), now,
                                 [](TimestampMs t, const Arrival& x) { return t < x.at; });
    TrafficSnapshot snap;
    snap.window_ms = window_ms_;
    std::unordered_set<std::string_view> ips;
    for (auto it = first; it != last; ++it) {
        ++snap.requests;
        if (it->error) ++snap.errors;
        ips.insert(it->client_ip);
    }
    snap.distinct_ips = ips.size();
    return snap;
}

ResourceModel::ResourceModel(std::shared_ptr<const TrafficWindow> traffic, ResourceMap map)
    : traffic_(std::move(traffic)), map_(map)
{
}

void ResourceModel::set_trajectory(std::vector<ResourcePoint> points)
{
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].time_s > points[i - 1].time_s)) {
            throw std::invalid_argument("trajectory time must be strictly increasing");
        }
    }
    std::lock_guard lock(mutex_);
    trajectory_ = std::move(points);
}

void ResourceModel::clear_trajectory()
{
    std::lock_guard lock(mutex_);
    trajectory_.clear();
}

void ResourceModel::set_map(const ResourceMap& map)
{
    std::lock_guard lock(mutex_);
    map_ = map;
}

namespace {

double clamp_percent(double v) { return std::clamp(v, 0.0, 100.0); }

}  // namespace

ResourceUsage ResourceModel::usage_for_rate(double requests_per_s) const
{
    std::lock_guard lock(mutex_);
    return {clamp_percent(map_.cpu_base + map_.cpu_per_rps * requests_per_s),
            clamp_percent(map_.memory_base + map_.memory_per_rps * requests_per_s)};
}

ResourceUsage ResourceModel::usage_at(TimestampMs now) const
{
    {
        std::lock_guard lock(mutex_);
        if (!trajectory_.empty()) {
            double t = static_cast<double>(now) / 1000.0;
            const auto& pts = trajectory_;
            if (t <= pts.front().time_s) return {clamp_percent(pts.front().cpu), clamp_percent(pts.front().memory)};
            if (t >= pts.back().time_s) return {clamp_percent(pts.back().cpu), clamp_percent(pts.back().memory)};
            auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                       [](double x, const ResourcePoint& p) { return x < p.time_s; });
            auto lo = hi - 1;
            double f = (t - lo->time_s) / (hi->time_s - lo->time_s);
            return {clamp_percent(lo->cpu + f * (hi->cpu - lo->cpu)),
                    clamp_percent(lo->memory + f * (hi->memory - lo->memory))};
        }
    }
    double rate = traffic_ ? traffic_->snapshot(now).rate_per_s() : 0.0;
    return usage_for_rate(rate);
}

ServiceSimulation ServiceSimulation::create(bool with_database, TimestampMs window_ms,
                                            std::size_t cache_capacity)
{
    ServiceSimulation sim;
    if (with_database) sim.database = std::make_shared<SimDatabase>();
    sim.traffic = std::make_shared<TrafficWindow>(window_ms);
    sim.resources = std::make_shared<ResourceModel>(sim.traffic);
    sim.cache_mutex = std::make_shared<std::mutex>();
    sim.cache = std::make_shared<LruCache<std::string, std::string>>(cache_capacity);
    return sim;
}

}  // namespace adaptiflow::teastore
