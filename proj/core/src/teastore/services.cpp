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

#include "adaptiflow/teastore/services.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "adaptiflow/errors.hpp"

namespace adaptiflow::teastore {

namespace {

struct Builtin {
    std::string id;
    std::function<std::unique_ptr<AdaptationAction>()> make;
};

std::unique_ptr<AdaptationAction> flag_action(std::string id, std::string inverse,
                                              std::function<void(AdaptationState&)> target)
{
    return std::make_unique<StateAction>(std::move(id), std::move(inverse), std::move(target));
}

std::vector<Builtin> circuit_breaker()
{
    return {
        {"OpenCircuitBreaker",
         [] { return flag_action("OpenCircuitBreaker", "CloseCircuitBreaker", [](AdaptationState& s) { s.circuit_open = true; }); }},
        {"CloseCircuitBreaker",
         [] { return flag_action("CloseCircuitBreaker", "OpenCircuitBreaker", [](AdaptationState& s) { s.circuit_open = false; }); }},
    };
}

std::vector<Builtin> builtins(ServiceRole role)
{
    std::vector<Builtin> out;
    switch (role) {
    case ServiceRole::webui:
        out = {
            {"EnableMaintenanceMode",
             [] { return flag_action("EnableMaintenanceMode", "DisableMaintenanceMode", [](AdaptationState& s) { s.maintenance = true; }); }},
            {"DisableMaintenanceMode",
             [] { return flag_action("DisableMaintenanceMode", "EnableMaintenanceMode", [](AdaptationState& s) { s.maintenance = false; }); }},
        };
        for (auto& b : circuit_breaker()) out.push_back(std::move(b));
        out.push_back({"DDoSAttackEventBroadcast", [] {
                           return std::make_unique<BroadcastAction>(
                               "DDoSAttackEventBroadcast", "MaliciousTrafficEvent",
                               std::map<std::string, std::string>{{"attack", "ddos"}});
                       }});
        break;
    case ServiceRole::persistence:
        out = {
            {"EnableCache",
             [] { return flag_action("EnableCache", "DisableCache", [](AdaptationState& s) { s.cache_enabled = true; }); }},
            {"DisableCache",
             [] { return flag_action("DisableCache", "EnableCache", [](AdaptationState& s) { s.cache_enabled = false; }); }},
            {"DatabaseAvailableEventBroadcast",
             [] { return std::make_unique<BroadcastAction>("DatabaseAvailableEventBroadcast", "DatabaseAvailableEvent"); }},
            {"DatabaseUnavailableEventBroadcast",
             [] {
                 return std::make_unique<BroadcastAction>("DatabaseUnavailableEventBroadcast", "DatabaseUnavailableEvent",
                                                          std::map<std::string, std::string>{},
                                                          "administrator should restart the database");
             }},
        };
        break;
    case ServiceRole::recommender:
        out = {
            {"LowPowerMode",
             [] { return flag_action("LowPowerMode", "NormalMode", [](AdaptationState& s) { s.power_mode = PowerMode::low; }); }},
            {"NormalMode",
             [] { return flag_action("NormalMode", "LowPowerMode", [](AdaptationState& s) { s.power_mode = PowerMode::normal; }); }},
        };
        for (auto& b : circuit_breaker()) out.push_back(std::move(b));
        break;
    case ServiceRole::auth:
        out = circuit_breaker();
        break;
    case ServiceRole::image:
        out = {
            {"EnableExternalImageProvider",
             [] {
                 return flag_action("EnableExternalImageProvider", "DisableExternalImageProvider",
                                    [](AdaptationState& s) { s.image_provider = ImageProvider::external; });
             }},
            {"DisableExternalImageProvider",
             [] {
                 return flag_action("DisableExternalImageProvider", "EnableExternalImageProvider",
                                    [](AdaptationState& s) { s.image_provider = ImageProvider::local; });
             }},
        };
        for (auto& b : circuit_breaker()) out.push_back(std::move(b));
        break;
    case ServiceRole::custom:
        break;
    }
    return out;
}

bool failed(ResponseClass c) { return c == ResponseClass::error || c == ResponseClass::unreachable; }

// Records the batch and, when anything failed, runs the node's failure
// triggers once.
void account(ServiceNode& node, std::span<const Request> requests, const std::vector<Response>& responses)
{
    bool any_failed = false;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        bool err = failed(responses[i].status);
        any_failed = any_failed || err;
        node.sim().traffic->record(requests[i].at, requests[i].client_ip, err);
    }
    if (!any_failed) return;
    for (const auto& event : node.observation().failure_triggers) {
        node.trigger_on_demand(event, node.clock().now());
    }
}

std::string_view item_of(const Request& r)
{
    auto slash = r.path.rfind('/');
    return slash == std::string::npos ? std::string_view{} : std::string_view(r.path).substr(slash + 1);
}

class WebUiHandler final : public RequestHandler {
public:
    std::vector<Response> handle(ServiceNode& node, std::span<const Request> requests) override
    {
        auto state = node.state();
        std::vector<Response> out(requests.size());
        std::vector<std::size_t> forwarded;
        for (std::size_t i = 0; i < requests.size(); ++i) {
            if (state.maintenance.value_or(false)) {
                out[i] = {ResponseClass::maintenance, "TeaStore is down for maintenance", 1.0};
            } else if (state.circuit_open.value_or(false)) {
                out[i] = {ResponseClass::unavailable, "service unavailable", 1.0};
            } else {
                out[i] = {ResponseClass::ok, "page", 2.0};
                forwarded.push_back(i);
            }
        }

        if (!forwarded.empty()) {
            Transport* transport = node.transport();
            auto peers = node.peers();
            static const std::vector<std::pair<std::string, std::string>> kRoutes = {
                {"auth", "/login"},
                {"persistence", "/products/"},
                {"recommender", "/recommend"},
                {"image", "/image/"},
            };
            for (const auto& [peer, path] : kRoutes) {
                auto it = peers.find(peer);
                if (it == peers.end()) continue;
                std::vector<Request> batch;
                batch.reserve(forwarded.size());
                for (auto i : forwarded) {
                    Request r = requests[i];
                    r.path = path;
                    if (path.back() == '/') r.path += std::to_string(client_item(r.client_ip));
                    batch.push_back(std::move(r));
                }
                std::vector<Response> replies;
                if (transport) {
                    try {
                        replies = transport->send_requests(it->second, batch);
                    } catch (const std::exception&) {
                        replies.assign(batch.size(), Response{ResponseClass::unreachable, peer, 0.0});
                    }
                } else {
                    replies.assign(batch.size(), Response{ResponseClass::unreachable, peer, 0.0});
                }
                for (std::size_t k = 0; k < forwarded.size() && k < replies.size(); ++k) {
                    auto& mine = out[forwarded[k]];
                    mine.latency_ms += replies[k].latency_ms;
                    if (failed(replies[k].status)) mine.status = ResponseClass::error;
                }
            }
        }
        account(node, requests, out);
        return out;
    }

private:
    static int client_item(const std::string& ip)
    {
        // Stable item id per client so the persistence cache sees repeats.
        // FNV-1a rather than std::hash so reports match across toolchains.
        std::uint32_t h = 2166136261u;
        for (unsigned char c : ip) {
            h ^= c;
            h *= 16777619u;
        }
        return static_cast<int>(h % 16);
    }
};

class PersistenceHandler final : public RequestHandler {
public:
    std::vector<Response> handle(ServiceNode& node, std::span<const Request> requests) override
    {
        auto state = node.state();
        bool cache_on = state.cache_enabled.value_or(false);
        const auto& sim = node.sim();
        std::vector<Response> out(requests.size());
        for (std::size_t i = 0; i < requests.size(); ++i) {
            std::string key(requests[i].path);
            std::lock_guard lock(*sim.cache_mutex);
            if (cache_on) {
                if (auto hit = sim.cache->get(key)) {
                    out[i] = {ResponseClass::ok, *hit, 1.0};
                    continue;
                }
            }
            if (auto row = sim.database->query(key)) {
                sim.cache->put(key, *row);
                out[i] = {ResponseClass::ok, *row, sim.database->probe().response_time_ms};
            } else {
                out[i] = {ResponseClass::error, "database unavailable", 0.0};
            }
        }
        account(node, requests, out);
        return out;
    }
};

class SimpleHandler final : public RequestHandler {
public:
    std::vector<Response> handle(ServiceNode& node, std::span<const Request> requests) override
    {
        auto state = node.state();
        std::vector<Response> out(requests.size());
        for (std::size_t i = 0; i < requests.size(); ++i) {
            if (state.circuit_open.value_or(false)) {
                out[i] = {ResponseClass::unavailable, "circuit open", 0.5};
                continue;
            }
            switch (node.role()) {
            case ServiceRole::recommender:
                out[i] = state.power_mode == PowerMode::low ? Response{ResponseClass::ok, "[]", 1.0}
                                                            : Response{ResponseClass::ok, "[1,2,3]", 15.0};
                break;
            case ServiceRole::image: {
                std::string item(item_of(requests[i]));
                if (state.image_provider == ImageProvider::external) {
                    out[i] = {ResponseClass::ok, "https://images.external.invalid/" + item, kExternalImageLatencyMs};
                } else {
                    out[i] = {ResponseClass::ok, "/img/" + item, 5.0};
                }
                break;
            }
            case ServiceRole::auth:
                out[i] = {ResponseClass::ok, "session", 3.0};
                break;
            default:
                out[i] = {ResponseClass::ok, {}, 1.0};
                break;
            }
        }
        account(node, requests, out);
        return out;
    }
};

}  // namespace

const std::vector<std::string>& service_ids()
{
    static const std::vector<std::string> ids = {"auth", "image", "persistence", "recommender", "webui"};
    return ids;
}

std::vector<std::string> builtin_action_ids(ServiceRole role)
{
    std::vector<std::string> ids;
    for (const auto& b : builtins(role)) ids.push_back(b.id);
    return ids;
}

std::unique_ptr<AdaptationAction> make_builtin_action(ServiceRole role, std::string_view action_id)
{
    for (const auto& b : builtins(role)) {
        if (b.id == action_id) return b.make();
    }
    throw UnknownAction(std::string(action_id));
}

void install_business_logic(ServiceNode& node)
{
    switch (node.role()) {
    case ServiceRole::webui:
        node.set_request_handler(std::make_shared<WebUiHandler>());
        break;
    case ServiceRole::persistence:
        if (node.sim().database && node.sim().cache) {
            node.set_request_handler(std::make_shared<PersistenceHandler>());
        }
        break;
    case ServiceRole::auth:
    case ServiceRole::recommender:
    case ServiceRole::image:
        node.set_request_handler(std::make_shared<SimpleHandler>());
        break;
    case ServiceRole::custom:
        break;
    }
}

std::unique_ptr<ServiceNode> make_service(std::string id, ServiceRole role, const Clock& clock,
                                          const ServiceOptions& options)
{
    auto sim = ServiceSimulation::create(role == ServiceRole::persistence, options.request_window_ms,
                                         options.cache_capacity);
    if (sim.database) sim.database = std::make_shared<SimDatabase>(options.database);
    sim.resources->set_map(options.resources);
    auto node = std::make_unique<ServiceNode>(std::move(id), role, clock, std::move(sim));
    install_business_logic(*node);
    if (options.register_builtin_actions) {
        for (const auto& b : builtins(role)) node->register_action(b.make());
    }
    return node;
}

}  // namespace adaptiflow::teastore
