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

#ifndef ADAPTIFLOW_TEASTORE_SIM_HPP_
#define ADAPTIFLOW_TEASTORE_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adaptiflow/clock.hpp"

namespace adaptiflow::teastore {

struct Fault {
    enum class Kind { down, up, slow };
    Kind kind = Kind::down;
    double latency_ms = 0.0;  ///< used by Kind::slow

    static Fault down() { return {Kind::down, 0.0}; }
    static Fault up() { return {Kind::up, 0.0}; }
    static Fault slow(double latency_ms) { return {Kind::slow, latency_ms}; }
};

std::string_view to_string(Fault::Kind kind);
/// Throws std::invalid_argument for unknown names.
Fault::Kind fault_kind_from_string(std::string_view name);

struct DatabaseProbe {
    bool network_ok = true;
    double response_time_ms = 0.0;
    std::int64_t active_connections = 0;
    std::int64_t pending_queries = 0;
};

/// Synthetic backing store of the Persistence service.
class SimDatabase {
public:
    struct Options {
        double base_latency_ms = 12.0;
        /// Reported response time while the database is unreachable.
        double timeout_ms = 10000.0;
        std::int64_t active_connections = 3;
    };

    SimDatabase() : SimDatabase(Options{}) {}
    explicit SimDatabase(Options options);

    /// down: unreachable. up: reachable at base latency. slow: latency set
    /// to the given value, reachability unchanged.
    void inject_fault(const Fault& fault);
    void set_connections(std::int64_t active, std::int64_t pending);

    DatabaseProbe probe() const;
    bool up() const;

    /// nullopt while down; failed queries are counted as pending.
    std::optional<std::string> query(std::string_view key);

private:
    mutable std::mutex mutex_;
    Options options_;
    bool up_ = true;
    double latency_ms_;
    std::int64_t active_connections_;
    std::int64_t pending_queries_ = 0;
};

struct TrafficSnapshot {
    std::size_t requests = 0;
    std::size_t distinct_ips = 0;
    std::size_t errors = 0;
    TimestampMs window_ms = 0;

    double rate_per_s() const;
    double error_rate() const;
};

/// Sliding window of request arrivals; a snapshot at `now` covers
/// (now - window, now].
class TrafficWindow {
public:
    explicit TrafficWindow(TimestampMs window_ms = 60000);

    void record(TimestampMs at, std::string_view client_ip, bool error = false);
    TrafficSnapshot snapshot(TimestampMs now) const;
    TimestampMs window_ms() const { return window_ms_; }

private:
    struct Arrival {
        TimestampMs at;
        std::string client_ip;
        bool error;
    };

    mutable std::mutex mutex_;
    TimestampMs window_ms_;
    TimestampMs latest_ = 0;
    std::deque<Arrival> arrivals_;  // sorted by `at`
};

/// Affine load-to-usage map, clamped to [0, 100].
struct ResourceMap {
    double cpu_base = 20.0;
    double cpu_per_rps = 0.25;
    double memory_base = 30.0;
    double memory_per_rps = 0.15;
};

struct ResourcePoint {
    double time_s = 0.0;
    double cpu = 0.0;
    double memory = 0.0;
};

struct ResourceUsage {
    double cpu = 0.0;
    double memory = 0.0;
};

class ResourceModel {
public:
    explicit ResourceModel(std::shared_ptr<const TrafficWindow> traffic, ResourceMap map = {});

    /// A scripted piecewise-linear trajectory replaces the load map until
    /// cleared. Points must have strictly increasing time.
    void set_trajectory(std::vector<ResourcePoint> points);
    void clear_trajectory();
    void set_map(const ResourceMap& map);

    ResourceUsage usage_at(TimestampMs now) const;
    ResourceUsage usage_for_rate(double requests_per_s) const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const TrafficWindow> traffic_;
    ResourceMap map_;
    std::vector<ResourcePoint> trajectory_;
};

/// Bounded least-recently-used map.
template <typename Key, typename Value>
class LruCache {
public:
    explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

    std::optional<Value> get(const Key& key) {
        auto it = index_.find(key);
        if (it == index_.end()) return std::nullopt;
        order_.splice(order_.begin(), order_, it->second);
        return it->second->second;
    }

    void put(const Key& key, Value value) {
        if (capacity_ == 0) return;
        if (auto it = index_.find(key); it != index_.end()) {
            it->second->second = std::move(value);
            order_.splice(order_.begin(), order_, it->second);
            return;
        }
        if (order_.size() == capacity_) {
            index_.erase(order_.back().first);
            order_.pop_back();
        }
        order_.emplace_front(key, std::move(value));
        index_[key] = order_.begin();
    }

    std::size_t size() const { return order_.size(); }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::list<std::pair<Key, Value>> order_;
    std::unordered_map<Key, typename std::list<std::pair<Key, Value>>::iterator> index_;
};

/// Observables of one simulated service. The database is present only on
/// the Persistence service.
struct ServiceSimulation {
    std::shared_ptr<SimDatabase> database;
    std::shared_ptr<TrafficWindow> traffic;
    std::shared_ptr<ResourceModel> resources;
    std::shared_ptr<std::mutex> cache_mutex;
    std::shared_ptr<LruCache<std::string, std::string>> cache;

    static ServiceSimulation create(bool with_database, TimestampMs window_ms = 60000,
                                    std::size_t cache_capacity = 1024);
};

}  // namespace adaptiflow::teastore

#endif  // ADAPTIFLOW_TEASTORE_SIM_HPP_
