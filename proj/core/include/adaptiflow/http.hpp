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

#ifndef ADAPTIFLOW_HTTP_HPP_
#define ADAPTIFLOW_HTTP_HPP_

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include "adaptiflow/node.hpp"

namespace adaptiflow {

/// Serves one node's endpoints over HTTP:
///
///   GET  /adaptiflow/metrics            latest sample of every collector
///   GET  /adaptiflow/metrics/{id}       fresh sample
///   GET  /adaptiflow/actions            registered actions
///   POST /adaptiflow/actions/{id}       invoke; body {"at", "trigger"}, both optional
///   GET  /adaptiflow/events             events and subscriber states
///   POST /adaptiflow/events/notify      inbound peer notification
///   GET  /adaptiflow/state              adaptation flags and timeline
///   POST /sim/fault                     {"target","kind","param"}
///   POST /sim/requests                  batch of business requests
///   GET  /products /recommend /login /cart /image/{id}
class NodeServer {
public:
    NodeServer(ServiceNode& node, std::string host = "127.0.0.1", int port = 0);
    ~NodeServer();

    NodeServer(const NodeServer&) = delete;
    NodeServer& operator=(const NodeServer&) = delete;

    /// Binds and starts listening. Throws AddressInUse.
    void start();
    void stop();

    int port() const { return port_; }
    /// "host:port"
    std::string address() const;

private:
    struct Impl;
    ServiceNode& node_;
    std::string host_;
    int port_;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
};

/// HTTP client side of the mesh; addresses are "host:port".
class SocketTransport final : public Transport {
public:
    explicit SocketTransport(std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));

    ActionOutcome invoke_action(const std::string& address, const std::string& action_id,
                                TimestampMs at, const std::string& trigger) override;
    DeliveryReport deliver(const std::string& address, const Notification& n) override;
    std::vector<Response> send_requests(const std::string& address,
                                        std::span<const Request> requests) override;

private:
    std::chrono::milliseconds timeout_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_HTTP_HPP_
