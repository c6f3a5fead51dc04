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

#include "adaptiflow/collectors.hpp"

#include <stdexcept>

namespace adaptiflow {

LocalDatabaseMetricsCollector::LocalDatabaseMetricsCollector(
    std::shared_ptr<const teastore::SimDatabase> db, std::string id)
    : MetricsCollector(std::move(id),
                       {{"response_time_ms", MetricKind::numeric, "ms", "health probe round trip"},
                        {"network_ok", MetricKind::boolean, "", "database reachable"},
                        {"active_connections", MetricKind::numeric, "", "open connections"},
                        {"pending_queries", MetricKind::numeric, "", "queries waiting or failed"}}),
      db_(std::move(db))
{
    if (!db_) throw std::invalid_argument("database collector needs a database");
}

std::map<std::string, MetricValue> LocalDatabaseMetricsCollector::read(TimestampMs)
{
    auto p = db_->probe();
    return {{"response_time_ms", p.response_time_ms},
            {"network_ok", p.network_ok},
            {"active_connections", static_cast<double>(p.active_connections)},
            {"pending_queries", static_cast<double>(p.pending_queries)}};
}

LocalRequestMetricsCollector::LocalRequestMetricsCollector(
    std::shared_ptr<const teastore::TrafficWindow> traffic, std::string id)
    : MetricsCollector(std::move(id),
                       {{"request_rate", MetricKind::numeric, "req/s", "windowed average"},
                        {"distinct_ips", MetricKind::numeric, "", "client addresses in window"},
                        {"error_rate", MetricKind::numeric, "", "failed fraction in window"}}),
      traffic_(std::move(traffic))
{
    if (!traffic_) throw std::invalid_argument("request collector needs a traffic window");
}

std::map<std::string, MetricValue> LocalRequestMetricsCollector::read(TimestampMs now)
{
    auto s = traffic_->snapshot(now);
    return {{"request_rate", s.rate_per_s()},
            {"distinct_ips", static_cast<double>(s.distinct_ips)},
            {"error_rate", s.error_rate()}};
}

ResourceUsageCollector::ResourceUsageCollector(std::shared_ptr<const teastore::ResourceModel> model,
                                               std::string id)
    : MetricsCollector(std::move(id),
                       {{"cpu_usage", MetricKind::numeric, "%", ""},
                        {"memory_usage", MetricKind::numeric, "%", ""}}),
      model_(std::move(model))
{
    if (!model_) throw std::invalid_argument("resource collector needs a resource model");
}

std::map<std::string, MetricValue> ResourceUsageCollector::read(TimestampMs now)
{
    auto u = model_->usage_at(now);
    return {{"cpu_usage", u.cpu}, {"memory_usage", u.memory}};
}

}  // namespace adaptiflow
