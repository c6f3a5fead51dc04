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

#ifndef ADAPTIFLOW_TRANSPORT_HPP_
#define ADAPTIFLOW_TRANSPORT_HPP_

#include <map>
#include <mutex>
#include <set>
#include <string>

#include "adaptiflow/node.hpp"

namespace adaptiflow {

/// In-process transport. Calls run synchronously on the caller's thread,
/// which preserves per-sender FIFO order trivially.
class LoopbackTransport final : public Transport {
public:
    static constexpr std::string_view kScheme = "loopback://";

    /// Makes `node` reachable at "loopback://<id>" and points the node at
    /// this transport. Throws AddressInUse if the address is taken.
    std::string serve(ServiceNode& node);
    void unserve(const std::string& node_id);

    /// Simulated network partition of one node.
    void partition(const std::string& node_id, bool unreachable = true);

    ActionOutcome invoke_action(const std::string& address, const std::string& action_id,
                                TimestampMs at, const std::string& trigger) override;
    DeliveryReport deliver(const std::string& address, const Notification& n) override;
    std::vector<Response> send_requests(const std::string& address,
                                        std::span<const Request> requests) override;

private:
    ServiceNode& resolve(const std::string& address);

    std::mutex mutex_;
    std::map<std::string, ServiceNode*> nodes_;
    std::set<std::string> partitioned_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_TRANSPORT_HPP_
