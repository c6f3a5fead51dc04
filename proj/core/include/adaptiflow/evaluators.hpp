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

#ifndef ADAPTIFLOW_EVALUATORS_HPP_
#define ADAPTIFLOW_EVALUATORS_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "adaptiflow/events.hpp"

namespace adaptiflow {

enum class Comparison { greater_than, less_than, between };

std::string_view to_string(Comparison c);
Comparison comparison_from_string(std::string_view s);

/// Single-metric threshold test. `between` is inclusive on both ends. A
/// missing or non-numeric metric evaluates to false.
class ThresholdEvaluator final : public ConditionEvaluator {
public:
    ThresholdEvaluator(std::string id, std::string metric_key, Comparison comparison, double bound);
    /// between(lower, upper); throws std::invalid_argument if lower > upper.
    ThresholdEvaluator(std::string id, std::string metric_key, double lower, double upper);

    bool evaluate(const MetricsSample& sample) const override;

    const std::string& metric_key() const { return key_; }
    Comparison comparison() const { return comparison_; }
    double lower() const { return lower_; }
    double upper() const { return upper_; }

private:
    std::string key_;
    Comparison comparison_;
    double lower_;
    double upper_;
};

/// Context-aware evaluator built from an arbitrary pure predicate.
class PredicateEvaluator final : public ConditionEvaluator {
public:
    PredicateEvaluator(std::string id, std::function<bool(const MetricsSample&)> predicate)
        : ConditionEvaluator(std::move(id)), predicate_(std::move(predicate)) {}

    bool evaluate(const MetricsSample& sample) const override { return predicate_(sample); }

private:
    std::function<bool(const MetricsSample&)> predicate_;
};

class ConstantEvaluator final : public ConditionEvaluator {
public:
    ConstantEvaluator(std::string id, bool value) : ConditionEvaluator(std::move(id)), value_(value) {}
    bool evaluate(const MetricsSample&) const override { return value_; }

private:
    bool value_;
};

/// True when boolean key `key` equals `expected`; missing key is false.
class FlagEvaluator final : public ConditionEvaluator {
public:
    FlagEvaluator(std::string id, std::string key, bool expected = true)
        : ConditionEvaluator(std::move(id)), key_(std::move(key)), expected_(expected) {}

    bool evaluate(const MetricsSample& sample) const override;

private:
    std::string key_;
    bool expected_;
};

class AllOf final : public ConditionEvaluator {
public:
    AllOf(std::string id, std::vector<EvaluatorPtr> parts);
    bool evaluate(const MetricsSample& sample) const override;

private:
    std::vector<EvaluatorPtr> parts_;
};

class AnyOf final : public ConditionEvaluator {
public:
    AnyOf(std::string id, std::vector<EvaluatorPtr> parts);
    bool evaluate(const MetricsSample& sample) const override;

private:
    std::vector<EvaluatorPtr> parts_;
};

// Database health. Unhealthy: response_time_ms > limit OR network_ok false.
// Healthy is the exact complement over samples carrying both keys. A sample
// missing either key is neither healthy nor unhealthy.

class UnhealthyDatabaseEvaluator final : public ConditionEvaluator {
public:
    explicit UnhealthyDatabaseEvaluator(std::string id = "UnHealthyDatabaseEvaluator",
                                        double response_limit_ms = 5000.0);
    bool evaluate(const MetricsSample& sample) const override;

private:
    double limit_;
};

class HealthyDatabaseEvaluator final : public ConditionEvaluator {
public:
    explicit HealthyDatabaseEvaluator(std::string id = "HealthyDatabaseEvaluator",
                                      double response_limit_ms = 5000.0);
    bool evaluate(const MetricsSample& sample) const override;

private:
    double limit_;
};

/// request_rate > threshold.
class DdosEvaluator final : public ConditionEvaluator {
public:
    explicit DdosEvaluator(std::string id = "DDoSEvaluator", double threshold_rps = 300.0);
    bool evaluate(const MetricsSample& sample) const override;

private:
    double threshold_;
};

/// request_rate <= threshold.
class NonDdosEvaluator final : public ConditionEvaluator {
public:
    explicit NonDdosEvaluator(std::string id = "NonDDoSEvaluator", double threshold_rps = 300.0);
    bool evaluate(const MetricsSample& sample) const override;

private:
    double threshold_;
};

/// cpu_usage > cpu_high OR memory_usage > memory_high. A missing metric
/// counts as not exceeding its limit.
class IncreaseResourceUsageEvaluator final : public ConditionEvaluator {
public:
    explicit IncreaseResourceUsageEvaluator(std::string id = "IncreaseResourceUsageEvaluator",
                                            double cpu_high = 75.0, double memory_high = 80.0);
    bool evaluate(const MetricsSample& sample) const override;

    double cpu_high() const { return cpu_high_; }
    double memory_high() const { return memory_high_; }

private:
    double cpu_high_;
    double memory_high_;
};

/// cpu_usage < cpu_low AND memory_usage < memory_low; both metrics required.
class DecreaseResourceUsageEvaluator final : public ConditionEvaluator {
public:
    explicit DecreaseResourceUsageEvaluator(std::string id = "DecreaseResourceUsageEvaluator",
                                            double cpu_low = 60.0, double memory_low = 60.0);
    bool evaluate(const MetricsSample& sample) const override;

private:
    double cpu_low_;
    double memory_low_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_EVALUATORS_HPP_
