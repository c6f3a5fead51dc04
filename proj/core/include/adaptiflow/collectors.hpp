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

#ifndef ADAPTIFLOW_COLLECTORS_HPP_
#define ADAPTIFLOW_COLLECTORS_HPP_

#include <memory>
#include <string>

#include "adaptiflow/metrics.hpp"
#include "adaptiflow/teastore/sim.hpp"

namespace adaptiflow {

/// Database health: response_time_ms, network_ok, active_connections,
/// pending_queries. An unreachable database yields network_ok=false rather
/// than an error.
class LocalDatabaseMetricsCollector final : public MetricsCollector {
public:
    explicit LocalDatabaseMetricsCollector(std::shared_ptr<const teastore::SimDatabase> db,
                                           std::string id = "local-db");

protected:
    std::map<std::string, MetricValue> read(TimestampMs now) override;

private:
    std::shared_ptr<const teastore::SimDatabase> db_;
};

/// Windowed traffic: request_rate (req/s over the window), distinct_ips,
/// error_rate (fraction of the same window).
class LocalRequestMetricsCollector final : public MetricsCollector {
public:
    explicit LocalRequestMetricsCollector(std::shared_ptr<const teastore::TrafficWindow> traffic,
                                          std::string id = "local-requests");

protected:
    std::map<std::string, MetricValue> read(TimestampMs now) override;

private:
    std::shared_ptr<const teastore::TrafficWindow> traffic_;
};

/// cpu_usage and memory_usage in percent.
class ResourceUsageCollector final : public MetricsCollector {
public:
    explicit ResourceUsageCollector(std::shared_ptr<const teastore::ResourceModel> model,
                                    std::string id = "resource-usage");

protected:
    std::map<std::string, MetricValue> read(TimestampMs now) override;

private:
    std::shared_ptr<const teastore::ResourceModel> model_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_COLLECTORS_HPP_
