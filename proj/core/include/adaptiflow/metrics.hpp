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

#ifndef ADAPTIFLOW_METRICS_HPP_
#define ADAPTIFLOW_METRICS_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adaptiflow/clock.hpp"

namespace adaptiflow {

/// A numeric value carries its unit in the descriptor, never in the value.
using MetricValue = std::variant<double, bool, std::string>;

enum class MetricKind { numeric, boolean, text };

std::string_view to_string(MetricKind kind);
MetricKind kind_of(const MetricValue& value);

struct MetricDescriptor {
    std::string key;
    MetricKind kind = MetricKind::numeric;
    std::string unit;
    std::string description;
};

struct MetricsSample {
    std::string source;
    TimestampMs collected_at = 0;
    std::map<std::string, MetricValue> values;

    bool operator==(const MetricsSample&) const = default;

    /// nullopt when the key is missing or holds a non-numeric value.
    std::optional<double> number(std::string_view key) const;
    std::optional<bool> flag(std::string_view key) const;
    std::optional<std::string> text(std::string_view key) const;
};

/// Lower-case ASCII snake_case: [a-z][a-z0-9_]*.
bool is_metric_key(std::string_view key);

/// Observation contract. Implementations provide read(); collect() wraps it
/// and enforces the sample invariants (exact key set, matching kinds, finite
/// numbers, non-decreasing timestamps).
///
/// collect() must never touch adaptation state. Implementations that read
/// several observables take one consistent snapshot of them.
class MetricsCollector {
public:
    /// Throws std::invalid_argument on duplicate or malformed keys.
    MetricsCollector(std::string id, std::vector<MetricDescriptor> descriptors);
    virtual ~MetricsCollector() = default;

    MetricsCollector(const MetricsCollector&) = delete;
    MetricsCollector& operator=(const MetricsCollector&) = delete;

    const std::string& id() const { return id_; }
    std::span<const MetricDescriptor> descriptors() const { return descriptors_; }

    MetricsSample collect(std::string_view source, TimestampMs now);

protected:
    virtual std::map<std::string, MetricValue> read(TimestampMs now) = 0;

private:
    std::string id_;
    std::vector<MetricDescriptor> descriptors_;
    std::optional<TimestampMs> last_collected_at_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_METRICS_HPP_
