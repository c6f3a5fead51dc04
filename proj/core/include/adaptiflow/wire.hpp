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

// JSON documents exchanged on the wire and written to reports.

#ifndef ADAPTIFLOW_WIRE_HPP_
#define ADAPTIFLOW_WIRE_HPP_

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "adaptiflow/node.hpp"

namespace adaptiflow {

void to_json(nlohmann::json& j, const MetricValue& v);
void from_json(const nlohmann::json& j, MetricValue& v);
void to_json(nlohmann::json& j, const MetricsSample& s);
void from_json(const nlohmann::json& j, MetricsSample& s);
void to_json(nlohmann::json& j, const ActionOutcome& o);
void from_json(const nlohmann::json& j, ActionOutcome& o);
void to_json(nlohmann::json& j, const Notification& n);
void from_json(const nlohmann::json& j, Notification& n);
void to_json(nlohmann::json& j, const DeliveryReport& d);
void from_json(const nlohmann::json& j, DeliveryReport& d);
void to_json(nlohmann::json& j, const AdaptationState& s);
void from_json(const nlohmann::json& j, AdaptationState& s);
void to_json(nlohmann::json& j, const SubscriptionProgress& p);
void from_json(const nlohmann::json& j, SubscriptionProgress& p);
void to_json(nlohmann::json& j, const TimelineEntry& e);
void from_json(const nlohmann::json& j, TimelineEntry& e);
void to_json(nlohmann::json& j, const Request& r);
void from_json(const nlohmann::json& j, Request& r);
void to_json(nlohmann::json& j, const Response& r);
void from_json(const nlohmann::json& j, Response& r);
void to_json(nlohmann::json& j, const TickReport& r);

nlohmann::json actions_document(const ServiceNode& node);
nlohmann::json events_document(const ServiceNode& node);
nlohmann::json state_document(const ServiceNode& node);

/// FNV-1a over the compact JSON form of the sample; travels with
/// notifications as evidence.
std::string sample_digest(const MetricsSample& sample);

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_WIRE_HPP_
