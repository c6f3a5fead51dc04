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

#include "adaptiflow/http.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "adaptiflow/wire.hpp"

namespace adaptiflow {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const json& body)
{
    res.status = status;
    res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, int status, const std::string& what)
{
    reply(res, status, json{{"error", what}});
}

int http_status(ResponseClass c)
{
    switch (c) {
    case ResponseClass::ok: return 200;
    case ResponseClass::maintenance:
    case ResponseClass::unavailable: return 503;
    case ResponseClass::error:
    case ResponseClass::unreachable: return 502;
    }
    return 500;
}

std::pair<std::string, int> split_address(const std::string& address)
{
    auto colon = address.rfind(':');
    if (colon == std::string::npos) throw TargetUnreachable(address, "expected host:port");
    try {
        return {address.substr(0, colon), std::stoi(address.substr(colon + 1))};
    } catch (const std::exception&) {
        throw TargetUnreachable(address, "bad port");
    }
}

}  // namespace

struct NodeServer::Impl {
    httplib::Server server;
};

NodeServer::NodeServer(ServiceNode& node, std::string host, int port)
    : node_(node), host_(std::move(host)), port_(port), impl_(std::make_unique<Impl>())
{
    auto& srv = impl_->server;
    ServiceNode& n = node_;

    // The library default is SO_REUSEPORT, which lets a second server bind a
    // live port silently. REUSEADDR alone still allows rebinding after
    // TIME_WAIT.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });

    srv.Get("/adaptiflow/metrics", [&n](const httplib::Request&, httplib::Response& res) {
        json samples = json::array();
        for (const auto& s : n.latest_samples(n.clock().now())) {
            json sj;
            to_json(sj, s);
            samples.push_back(std::move(sj));
        }
        reply(res, 200, json{{"node", n.id()}, {"samples", std::move(samples)}});
    });

    srv.Get(R"(/adaptiflow/metrics/([^/]+))", [&n](const httplib::Request& req, httplib::Response& res) {
        try {
            json sj;
            to_json(sj, n.collect(req.matches[1], n.clock().now()));
            reply(res, 200, sj);
        } catch (const UnknownCollector& ex) {
            reply_error(res, 404, ex.what());
        } catch (const std::exception& ex) {
            reply_error(res, 503, ex.what());
        }
    });

    srv.Get("/adaptiflow/actions", [&n](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, actions_document(n));
    });

    srv.Post(R"(/adaptiflow/actions/([^/]+))", [&n](const httplib::Request& req, httplib::Response& res) {
        TimestampMs at = n.clock().now();
        std::string trigger;
        try {
            if (!req.body.empty()) {
                auto body = json::parse(req.body);
                at = body.value("at", at);
                trigger = body.value("trigger", "");
            }
        } catch (const std::exception& ex) {
            reply_error(res, 400, ex.what());
            return;
        }
        try {
            json oj;
            to_json(oj, n.apply_action(req.matches[1], at, trigger));
            reply(res, 200, oj);
        } catch (const UnknownAction& ex) {
            reply_error(res, 404, ex.what());
        } catch (const ActionFailed& ex) {
            json oj;
            to_json(oj, ex.outcome());
            reply(res, 200, oj);
        }
    });

    srv.Get("/adaptiflow/events", [&n](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, events_document(n));
    });

    srv.Post("/adaptiflow/events/notify", [&n](const httplib::Request& req, httplib::Response& res) {
        Notification note;
        try {
            from_json(json::parse(req.body), note);
        } catch (const std::exception& ex) {
            reply_error(res, 400, ex.what());
            return;
        }
        json dj;
        to_json(dj, n.receive_notification(note));
        reply(res, 200, dj);
    });

    srv.Get("/adaptiflow/state", [&n](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, state_document(n));
    });

    srv.Post("/sim/fault", [&n](const httplib::Request& req, httplib::Response& res) {
        try {
            auto body = json::parse(req.body);
            if (body.value("target", "database") != "database") {
                reply_error(res, 400, "only the database accepts faults");
                return;
            }
            if (!n.sim().database) {
                reply_error(res, 404, n.id() + " has no database");
                return;
            }
            teastore::Fault f{teastore::fault_kind_from_string(body.at("kind").get<std::string>()),
                              body.value("param", 0.0)};
            n.sim().database->inject_fault(f);
            reply(res, 200, json{{"applied", true}});
        } catch (const std::exception& ex) {
            reply_error(res, 400, ex.what());
        }
    });

    srv.Post("/sim/requests", [&n](const httplib::Request& req, httplib::Response& res) {
        std::vector<Request> batch;
        try {
            for (const auto& rj : json::parse(req.body)) {
                Request r;
                from_json(rj, r);
                batch.push_back(std::move(r));
            }
        } catch (const std::exception& ex) {
            reply_error(res, 400, ex.what());
            return;
        }
        json out = json::array();
        for (const auto& r : n.handle_requests(batch)) {
            json rj;
            to_json(rj, r);
            out.push_back(std::move(rj));
        }
        reply(res, 200, out);
    });

    auto business = [&n](const httplib::Request& req, httplib::Response& res) {
        Request r{n.clock().now(), req.remote_addr, req.path};
        auto responses = n.handle_requests(std::span<const Request>(&r, 1));
        const auto& out = responses.at(0);
        res.status = http_status(out.status);
        res.set_content(out.body, "text/plain");
    };
    for (const char* path : {"/products", "/recommend", "/login", "/cart", R"(/image/(\d+))"}) {
        srv.Get(path, business);
    }
}

NodeServer::~NodeServer() { stop(); }

void NodeServer::start()
{
    auto& srv = impl_->server;
    if (port_ == 0) {
        int bound = srv.bind_to_any_port(host_);
        if (bound <= 0) throw AddressInUse(host_ + ":0");
        port_ = bound;
    } else if (!srv.bind_to_port(host_, port_)) {
        throw AddressInUse(address());
    }
    thread_ = std::thread([&srv] { srv.listen_after_bind(); });
    srv.wait_until_ready();
}

void NodeServer::stop()
{
    if (thread_.joinable()) {
        impl_->server.stop();
        thread_.join();
    }
}

std::string NodeServer::address() const { return host_ + ":" + std::to_string(port_); }

SocketTransport::SocketTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

namespace {

httplib::Client make_client(const std::string& address, std::chrono::milliseconds timeout)
{
    auto [host, port] = split_address(address);
    httplib::Client cli(host, port);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    return cli;
}

}  // namespace

ActionOutcome SocketTransport::invoke_action(const std::string& address, const std::string& action_id,
                                             TimestampMs at, const std::string& trigger)
{
    auto cli = make_client(address, timeout_);
    json body{{"at", at}, {"trigger", trigger}};
    auto res = cli.Post("/adaptiflow/actions/" + action_id, body.dump(), kJson);
    if (!res) throw TargetUnreachable(address, httplib::to_string(res.error()));
    if (res->status == 404) throw UnknownAction(action_id);
    if (res->status != 200) throw TargetUnreachable(address, "HTTP " + std::to_string(res->status));
    ActionOutcome o;
    from_json(json::parse(res->body), o);
    return o;
}

DeliveryReport SocketTransport::deliver(const std::string& address, const Notification& n)
{
    try {
        auto cli = make_client(address, timeout_);
        json body;
        to_json(body, n);
        auto res = cli.Post("/adaptiflow/events/notify", body.dump(), kJson);
        if (!res) return {address, false, httplib::to_string(res.error())};
        if (res->status != 200) return {address, false, "HTTP " + std::to_string(res->status)};
        DeliveryReport d;
        from_json(json::parse(res->body), d);
        return d;
    } catch (const std::exception& ex) {
        return {address, false, ex.what()};
    }
}

std::vector<Response> SocketTransport::send_requests(const std::string& address,
                                                     std::span<const Request> requests)
{
    auto cli = make_client(address, timeout_);
    json body = json::array();
    for (const auto& r : requests) {
        json rj;
        to_json(rj, r);
        body.push_back(std::move(rj));
    }
    auto res = cli.Post("/sim/requests", body.dump(), kJson);
    if (!res) throw TargetUnreachable(address, httplib::to_string(res.error()));
    if (res->status != 200) throw TargetUnreachable(address, "HTTP " + std::to_string(res->status));
    std::vector<Response> out;
    for (const auto& rj : json::parse(res->body)) {
        Response r;
        from_json(rj, r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace adaptiflow
