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

#include "adaptiflow/evaluators.hpp"

#include <stdexcept>

namespace adaptiflow {

std::string_view to_string(Comparison c)
{
    switch (c) {
    case Comparison::greater_than: return "GreaterThan";
    case Comparison::less_than: return "LessThan";
    case Comparison::between: return "Between";
    }
    return "GreaterThan";
}

Comparison comparison_from_string(std::string_view s)
{
    if (s == "GreaterThan") return Comparison::greater_than;
    if (s == "LessThan") return Comparison::less_than;
    if (s == "Between") return Comparison::between;
    throw std::invalid_argument("unknown comparison: " + std::string(s));
}

ThresholdEvaluator::ThresholdEvaluator(std::string id, std::string metric_key, Comparison comparison,
                                       double bound)
    : ConditionEvaluator(std::move(id)), key_(std::move(metric_key)), comparison_(comparison),
      lower_(bound), upper_(bound)
{
    if (comparison == Comparison::between) {
        throw std::invalid_argument("Between needs a lower and an upper bound");
    }
}

ThresholdEvaluator::ThresholdEvaluator(std::string id, std::string metric_key, double lower, double upper)
    : ConditionEvaluator(std::move(id)), key_(std::move(metric_key)), comparison_(Comparison::between),
      lower_(lower), upper_(upper)
{
    if (lower > upper) throw std::invalid_argument("Between: lower bound exceeds upper bound");
}

bool ThresholdEvaluator::evaluate(const MetricsSample& sample) const
{
    auto v = sample.number(key_);
    if (!v) return false;
    switch (comparison_) {
    case Comparison::greater_than: return *v > lower_;
    case Comparison::less_than: return *v < lower_;
    case Comparison::between: return *v >= lower_ && *v <= upper_;
    }
    return false;
}

bool FlagEvaluator::evaluate(const MetricsSample& sample) const
{
    auto v = sample.flag(key_);
    return v && *v == expected_;
}

namespace {

void check_parts(const std::vector<EvaluatorPtr>& parts)
{
    for (const auto& p : parts) {
        if (!p) throw std::invalid_argument("null evaluator in composite");
    }
}

}  // namespace

AllOf::AllOf(std::string id, std::vector<EvaluatorPtr> parts)
    : ConditionEvaluator(std::move(id)), parts_(std::move(parts))
{
    check_parts(parts_);
}

bool AllOf::evaluate(const MetricsSample& sample) const
{
    for (const auto& p : parts_) {
        if (!p->evaluate(sample)) return false;
    }
    return true;
}

AnyOf::AnyOf(std::string id, std::vector<EvaluatorPtr> parts)
    : ConditionEvaluator(std::move(id)), parts_(std::move(parts))
{
    check_parts(parts_);
}

bool AnyOf::evaluate(const MetricsSample& sample) const
{
    for (const auto& p : parts_) {
        if (p->evaluate(sample)) return true;
    }
    return false;
}

UnhealthyDatabaseEvaluator::UnhealthyDatabaseEvaluator(std::string id, double response_limit_ms)
    : ConditionEvaluator(std::move(id)), limit_(response_limit_ms)
{
}

bool UnhealthyDatabaseEvaluator::evaluate(const MetricsSample& sample) const
{
    auto rt = sample.number("response_time_ms");
    auto ok = sample.flag("network_ok");
    return (rt && *rt > limit_) || (ok && !*ok);
}

HealthyDatabaseEvaluator::HealthyDatabaseEvaluator(std::string id, double response_limit_ms)
    : ConditionEvaluator(std::move(id)), limit_(response_limit_ms)
{
}

bool HealthyDatabaseEvaluator::evaluate(const MetricsSample& sample) const
{
    auto rt = sample.number("response_time_ms");
    auto ok = sample.flag("network_ok");
    return rt && ok && *rt <= limit_ && *ok;
}

DdosEvaluator::DdosEvaluator(std::string id, double threshold_rps)
    : ConditionEvaluator(std::move(id)), threshold_(threshold_rps)
{
}

bool DdosEvaluator::evaluate(const MetricsSample& sample) const
{
    auto r = sample.number("request_rate");
    return r && *r > threshold_;
}

NonDdosEvaluator::NonDdosEvaluator(std::string id, double threshold_rps)
    : ConditionEvaluator(std::move(id)), threshold_(threshold_rps)
{
}

bool NonDdosEvaluator::evaluate(const MetricsSample& sample) const
{
    auto r = sample.number("request_rate");
    return r && *r <= threshold_;
}

IncreaseResourceUsageEvaluator::IncreaseResourceUsageEvaluator(std::string id, double cpu_high,
                                                               double memory_high)
    : ConditionEvaluator(std::move(id)), cpu_high_(cpu_high), memory_high_(memory_high)
{
}

bool IncreaseResourceUsageEvaluator::evaluate(const MetricsSample& sample) const
{
    auto cpu = sample.number("cpu_usage");
    auto mem = sample.number("memory_usage");
    return (cpu && *cpu > cpu_high_) || (mem && *mem > memory_high_);
}

DecreaseResourceUsageEvaluator::DecreaseResourceUsageEvaluator(std::string id, double cpu_low,
                                                               double memory_low)
    : ConditionEvaluator(std::move(id)), cpu_low_(cpu_low), memory_low_(memory_low)
{
}

bool DecreaseResourceUsageEvaluator::evaluate(const MetricsSample& sample) const
{
    auto cpu = sample.number("cpu_usage");
    auto mem = sample.number("memory_usage");
    return cpu && mem && *cpu < cpu_low_ && *mem < memory_low_;
}

}  // namespace adaptiflow
