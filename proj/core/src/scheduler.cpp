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

#include "adaptiflow/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace adaptiflow {

namespace {

constexpr TimestampMs kNever = std::numeric_limits<TimestampMs>::max();

}  // namespace

TimestampMs interval_from_environment(TimestampMs fallback)
{
    const char* raw = std::getenv(kIntervalEnvVar);
    if (raw == nullptr) return fallback;
    std::string_view text(raw);
    TimestampMs value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::invalid_argument(std::string(kIntervalEnvVar) + " is not an integer: '" + raw + "'");
    }
    if (value <= 0) {
        throw std::invalid_argument(std::string(kIntervalEnvVar) + " must be positive");
    }
    return value;
}

void ObservationScheduler::add(ServiceNode& node)
{
    auto cfg = node.observation();
    Slot slot{&node, cfg.interval_ms, kNever};
    if (cfg.mode == ObservationMode::periodic) {
        if (cfg.interval_ms <= 0) throw std::invalid_argument("node " + node.id() + ": interval must be positive");
        slot.next_due = start_ + cfg.interval_ms;
    }
    if (!nodes_.emplace(node.id(), slot).second) {
        throw std::invalid_argument("node " + node.id() + " already scheduled");
    }
}

void ObservationScheduler::remove(const std::string& node_id) { nodes_.erase(node_id); }

TickReport ObservationScheduler::tick(ServiceNode& node, TimestampMs now)
{
    auto it = nodes_.find(node.id());
    if (it == nodes_.end()) throw std::logic_error("node " + node.id() + " is not scheduled");
    auto& slot = it->second;
    if (slot.next_due == kNever) throw std::logic_error("node " + node.id() + " observes on demand");
    if (now != slot.next_due) {
        throw std::logic_error("node " + node.id() + ": tick at " + std::to_string(now) + ", due at " +
                               std::to_string(slot.next_due));
    }
    slot.next_due += slot.interval;
    return node.tick(now);
}

std::optional<TimestampMs> ObservationScheduler::next_due() const
{
    TimestampMs best = kNever;
    for (const auto& [id, slot] : nodes_) best = std::min(best, slot.next_due);
    if (best == kNever) return std::nullopt;
    return best;
}

std::vector<TickReport> ObservationScheduler::run(VirtualClock& clock, TimestampMs until, const Hook& before_ticks)
{
    std::vector<TickReport> reports;
    while (true) {
        auto due = next_due();
        if (!due || *due > until) break;
        if (*due > clock.now()) clock.advance_to(*due);
        if (before_ticks) before_ticks(*due);
        // std::map iterates in node-id order.
        for (auto& [id, slot] : nodes_) {
            if (slot.next_due == *due) reports.push_back(tick(*slot.node, *due));
        }
    }
    return reports;
}

std::vector<TickReport> ObservationScheduler::run_live(const SystemClock& clock, TimestampMs until,
                                                       const std::atomic<bool>* stop)
{
    std::mutex reports_mutex;
    std::vector<TickReport> reports;
    std::vector<std::thread> workers;

    for (auto& [id, slot] : nodes_) {
        if (slot.next_due == kNever) continue;
        workers.emplace_back([&, s = &slot] {
            while (s->next_due <= until) {
                std::this_thread::sleep_until(clock.wall_time_of(s->next_due));
                if (stop && stop->load()) return;
                TimestampMs at = s->next_due;
                s->next_due += s->interval;
                auto report = s->node->tick(at);
                std::lock_guard lock(reports_mutex);
                reports.push_back(std::move(report));
            }
        });
    }
    for (auto& w : workers) w.join();

    std::sort(reports.begin(), reports.end(), [](const TickReport& a, const TickReport& b) {
        return a.at != b.at ? a.at < b.at : a.node < b.node;
    });
    return reports;
}

}  // namespace adaptiflow
