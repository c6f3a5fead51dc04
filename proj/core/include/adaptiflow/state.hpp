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

#ifndef ADAPTIFLOW_STATE_HPP_
#define ADAPTIFLOW_STATE_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adaptiflow {

enum class ServiceRole { webui, auth, persistence, recommender, image, custom };

std::string_view to_string(ServiceRole role);
/// Unknown names map to ServiceRole::custom.
ServiceRole role_from_string(std::string_view name);

enum class PowerMode { normal, low };
enum class ImageProvider { local, external };

std::string_view to_string(PowerMode mode);
std::string_view to_string(ImageProvider provider);

/// Adaptation flags of one node. A flag that does not apply to the node's
/// role is absent (nullopt).
struct AdaptationState {
    std::optional<bool> maintenance;
    std::optional<bool> circuit_open;
    std::optional<bool> cache_enabled;
    std::optional<PowerMode> power_mode;
    std::optional<ImageProvider> image_provider;
    std::optional<bool> ddos_armed;

    bool operator==(const AdaptationState&) const = default;

    /// Present flags rendered as text, keyed by flag name.
    std::map<std::string, std::string> flags() const;

    static AdaptationState initial_for(ServiceRole role);
};

struct FlagChange {
    std::string flag;
    std::string from;  ///< "" when the flag was absent
    std::string to;

    bool operator==(const FlagChange&) const = default;
};

/// Flags whose rendered value differs, in flag-name order.
std::vector<FlagChange> diff(const AdaptationState& before, const AdaptationState& after);

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_STATE_HPP_
