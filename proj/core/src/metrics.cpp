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

#include "adaptiflow/metrics.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "adaptiflow/errors.hpp"

namespace adaptiflow {

std::string_view to_string(MetricKind kind)
{
    switch (kind) {
    case MetricKind::numeric: return "numeric";
    case MetricKind::boolean: return "boolean";
    case MetricKind::text: return "text";
    }
    return "numeric";
}

MetricKind kind_of(const MetricValue& value)
{
    switch (value.index()) {
    case 0: return MetricKind::numeric;
    case 1: return MetricKind::boolean;
    default: return MetricKind::text;
    }
}

std::optional<double> MetricsSample::number(std::string_view key) const
{
    auto it = values.find(std::string(key));
    if (it == values.end()) return std::nullopt;
    if (const auto* d = std::get_if<double>(&it->second)) return *d;
    return std::nullopt;
}

std::optional<bool> MetricsSample::flag(std::string_view key) const
{
    auto it = values.find(std::string(key));
    if (it == values.end()) return std::nullopt;
    if (const auto* b = std::get_if<bool>(&it->second)) return *b;
    return std::nullopt;
}

std::optional<std::string> MetricsSample::text(std::string_view key) const
{
    auto it = values.find(std::string(key));
    if (it == values.end()) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    return std::nullopt;
}

bool is_metric_key(std::string_view key)
{
    if (key.empty() || key.front() < 'a' || key.front() > 'z') return false;
    for (char c : key) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

MetricsCollector::MetricsCollector(std::string id, std::vector<MetricDescriptor> descriptors)
    : id_(std::move(id)), descriptors_(std::move(descriptors))
{
    if (id_.empty()) throw std::invalid_argument("collector id must not be empty");
    std::set<std::string> seen;
    for (const auto& d : descriptors_) {
        if (!is_metric_key(d.key)) throw std::invalid_argument("malformed metric key: " + d.key);
        if (!seen.insert(d.key).second) throw std::invalid_argument("duplicate metric key: " + d.key);
    }
}

MetricsSample MetricsCollector::collect(std::string_view source, TimestampMs now)
{
    if (last_collected_at_ && now < *last_collected_at_) {
        throw std::invalid_argument("collector " + id_ + ": timestamp went backwards");
    }
    auto values = read(now);

    if (values.size() != descriptors_.size()) {
        throw std::logic_error("collector " + id_ + " produced a key set that differs from its descriptors");
    }
    for (const auto& d : descriptors_) {
        auto it = values.find(d.key);
        if (it == values.end()) {
            throw std::logic_error("collector " + id_ + " did not produce key " + d.key);
        }
        if (kind_of(it->second) != d.kind) {
            throw std::logic_error("collector " + id_ + ": key " + d.key + " has the wrong kind");
        }
        if (const auto* x = std::get_if<double>(&it->second); x && !std::isfinite(*x)) {
            throw CollectorUnavailable("collector " + id_ + ": non-finite value for " + d.key);
        }
    }

    last_collected_at_ = now;
    return MetricsSample{std::string(source), now, std::move(values)};
}

}  // namespace adaptiflow
