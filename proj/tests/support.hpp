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

// Helpers shared by the unit tests.

#ifndef ADAPTIFLOW_TESTS_SUPPORT_HPP_
#define ADAPTIFLOW_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "adaptiflow/errors.hpp"
#include "adaptiflow/metrics.hpp"

namespace adaptiflow::testing {

inline std::filesystem::path source_dir() { return ADAPTIFLOW_SOURCE_DIR; }
inline std::filesystem::path scenario_path(const std::string& name)
{
    return source_dir() / "scenarios" / (name + ".json");
}
inline std::filesystem::path profile_path(const std::string& name)
{
    return source_dir() / "profiles" / (name + ".csv");
}

/// Collector whose readings are set by the test. The handle stays valid
/// after the collector moves into a node.
class ScriptedCollector final : public MetricsCollector {
public:
    struct Values {
        std::mutex mutex;
        std::map<std::string, MetricValue> current;
        bool fail = false;

        void set(const std::string& key, MetricValue v)
        {
            std::lock_guard lock(mutex);
            current[key] = std::move(v);
        }
    };

    ScriptedCollector(std::string id, std::vector<MetricDescriptor> descriptors,
                      std::shared_ptr<Values> values)
        : MetricsCollector(std::move(id), std::move(descriptors)), values_(std::move(values)) {}

protected:
    std::map<std::string, MetricValue> read(TimestampMs) override
    {
        std::lock_guard lock(values_->mutex);
        if (values_->fail) throw CollectorUnavailable("scripted failure");
        return values_->current;
    }

private:
    std::shared_ptr<Values> values_;
};

/// A numeric "x" collector starting at `initial`.
inline std::pair<std::unique_ptr<ScriptedCollector>, std::shared_ptr<ScriptedCollector::Values>>
scripted_x(std::string id = "x", double initial = 0.0)
{
    auto values = std::make_shared<ScriptedCollector::Values>();
    values->current["x"] = initial;
    auto c = std::make_unique<ScriptedCollector>(std::move(id),
                                                 std::vector<MetricDescriptor>{{"x", MetricKind::numeric, "", ""}},
                                                 values);
    return {std::move(c), values};
}

inline MetricsSample sample_of(std::map<std::string, MetricValue> values)
{
    return MetricsSample{"test", 0, std::move(values)};
}

}  // namespace adaptiflow::testing

#endif  // ADAPTIFLOW_TESTS_SUPPORT_HPP_
