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

#include "adaptiflow/state.hpp"

#include <set>

namespace adaptiflow {

std::string_view to_string(ServiceRole role)
{
    switch (role) {
    case ServiceRole::webui: return "webui";
    case ServiceRole::auth: return "auth";
    case ServiceRole::persistence: return "persistence";
    case ServiceRole::recommender: return "recommender";
    case ServiceRole::image: return "image";
    case ServiceRole::custom: return "custom";
    }
    return "custom";
}

ServiceRole role_from_string(std::string_view name)
{
    for (auto role : {ServiceRole::webui, ServiceRole::auth, ServiceRole::persistence,
                      ServiceRole::recommender, ServiceRole::image}) {
        if (to_string(role) == name) return role;
    }
    return ServiceRole::custom;
}

std::string_view to_string(PowerMode mode)
{
    return mode == PowerMode::low ? "low" : "normal";
}

std::string_view to_string(ImageProvider provider)
{
    return provider == ImageProvider::external ? "external" : "local";
}

namespace {

std::string render(bool b) { return b ? "true" : "false"; }

}  // namespace

std::map<std::string, std::string> AdaptationState::flags() const
{
    std::map<std::string, std::string> out;
    if (maintenance) out["maintenance"] = render(*maintenance);
    if (circuit_open) out["circuit_open"] = render(*circuit_open);
    if (cache_enabled) out["cache_enabled"] = render(*cache_enabled);
    if (power_mode) out["power_mode"] = std::string(to_string(*power_mode));
    if (image_provider) out["image_provider"] = std::string(to_string(*image_provider));
    if (ddos_armed) out["ddos_armed"] = render(*ddos_armed);
    return out;
}

AdaptationState AdaptationState::initial_for(ServiceRole role)
{
    AdaptationState s;
    switch (role) {
    case ServiceRole::webui:
        s.maintenance = false;
        s.circuit_open = false;
        break;
    case ServiceRole::auth:
        s.circuit_open = false;
        s.ddos_armed = false;
        break;
    case ServiceRole::persistence:
        s.cache_enabled = false;
        s.ddos_armed = false;
        break;
    case ServiceRole::recommender:
        s.circuit_open = false;
        s.power_mode = PowerMode::normal;
        s.ddos_armed = false;
        break;
    case ServiceRole::image:
        s.circuit_open = false;
        s.image_provider = ImageProvider::local;
        s.ddos_armed = false;
        break;
    case ServiceRole::custom:
        break;
    }
    return s;
}

std::vector<FlagChange> diff(const AdaptationState& before, const AdaptationState& after)
{
    auto a = before.flags();
    auto b = after.flags();
    std::set<std::string> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);

    std::vector<FlagChange> changes;
    for (const auto& key : keys) {
        auto ia = a.find(key);
        auto ib = b.find(key);
        std::string from = ia == a.end() ? "" : ia->second;
        std::string to = ib == b.end() ? "" : ib->second;
        if (from != to) changes.push_back({key, from, to});
    }
    return changes;
}

}  // namespace adaptiflow
