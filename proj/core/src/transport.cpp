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

#include "adaptiflow/transport.hpp"

namespace adaptiflow {

std::string LoopbackTransport::serve(ServiceNode& node)
{
    std::string address = std::string(kScheme) + node.id();
    {
        std::lock_guard lock(mutex_);
        if (nodes_.count(address)) throw AddressInUse(address);
        nodes_[address] = &node;
    }
    node.set_transport(this);
    node.set_address(address);
    return address;
}

void LoopbackTransport::unserve(const std::string& node_id)
{
    std::lock_guard lock(mutex_);
    nodes_.erase(std::string(kScheme) + node_id);
}

void LoopbackTransport::partition(const std::string& node_id, bool unreachable)
{
    std::lock_guard lock(mutex_);
    if (unreachable) {
        partitioned_.insert(node_id);
    } else {
        partitioned_.erase(node_id);
    }
}

ServiceNode& LoopbackTransport::resolve(const std::string& address)
{
    std::lock_guard lock(mutex_);
    auto it = nodes_.find(address);
    if (it == nodes_.end()) throw TargetUnreachable(address, "nothing served there");
    if (partitioned_.count(it->second->id())) throw TargetUnreachable(address, "partitioned");
    return *it->second;
}

ActionOutcome LoopbackTransport::invoke_action(const std::string& address, const std::string& action_id,
                                               TimestampMs at, const std::string& trigger)
{
    ServiceNode& node = resolve(address);
    try {
        return node.apply_action(action_id, at, trigger);
    } catch (const ActionFailed& failed) {
        return failed.outcome();
    }
}

DeliveryReport LoopbackTransport::deliver(const std::string& address, const Notification& n)
{
    try {
        return resolve(address).receive_notification(n);
    } catch (const std::exception& ex) {
        return {address, false, ex.what()};
    }
}

std::vector<Response> LoopbackTransport::send_requests(const std::string& address,
                                                       std::span<const Request> requests)
{
    return resolve(address).handle_requests(requests);
}

}  // namespace adaptiflow
