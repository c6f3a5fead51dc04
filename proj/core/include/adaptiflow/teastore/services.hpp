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

#ifndef ADAPTIFLOW_TEASTORE_SERVICES_HPP_
#define ADAPTIFLOW_TEASTORE_SERVICES_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "adaptiflow/node.hpp"

namespace adaptiflow::teastore {

/// The five TeaStore services, in node-id order.
const std::vector<std::string>& service_ids();

/// Every built-in actuator the role can host.
std::vector<std::string> builtin_action_ids(ServiceRole role);

/// Throws UnknownAction when the role has no such built-in.
std::unique_ptr<AdaptationAction> make_builtin_action(ServiceRole role, std::string_view action_id);

/// Installs the role's request handler on `node`.
void install_business_logic(ServiceNode& node);

struct ServiceOptions {
    TimestampMs request_window_ms = 60000;
    std::size_t cache_capacity = 1024;
    SimDatabase::Options database;
    ResourceMap resources;
    /// Register every built-in action of the role.
    bool register_builtin_actions = true;
};

/// A node for `role` with its simulation, business logic and (optionally)
/// built-in actions. Persistence gets the database.
std::unique_ptr<ServiceNode> make_service(std::string id, ServiceRole role, const Clock& clock,
                                          const ServiceOptions& options = {});

/// Latency added when images come from the external provider.
inline constexpr double kExternalImageLatencyMs = 80.0;

}  // namespace adaptiflow::teastore

#endif  // ADAPTIFLOW_TEASTORE_SERVICES_HPP_
