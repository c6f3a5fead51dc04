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

#include "adaptiflow/clock.hpp"

#include <stdexcept>
#include <string>

namespace adaptiflow {

void VirtualClock::advance_to(TimestampMs t)
{
    TimestampMs current = now_.load(std::memory_order_acquire);
    if (t < current) {
        throw std::invalid_argument("virtual clock cannot move backwards: " + std::to_string(t) +
                                    " < " + std::to_string(current));
    }
    now_.store(t, std::memory_order_release);
}

void VirtualClock::advance_by(TimestampMs delta)
{
    if (delta < 0) throw std::invalid_argument("negative clock advance");
    now_.fetch_add(delta, std::memory_order_acq_rel);
}

SystemClock::SystemClock(double time_scale)
    : start_(std::chrono::steady_clock::now()), scale_(time_scale)
{
    if (!(time_scale > 0.0)) throw std::invalid_argument("time scale must be positive");
}

TimestampMs SystemClock::now() const
{
    auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_);
    return static_cast<TimestampMs>(elapsed.count() * scale_);
}

std::chrono::steady_clock::time_point SystemClock::wall_time_of(TimestampMs t) const
{
    auto wall = std::chrono::duration<double, std::milli>(static_cast<double>(t) / scale_);
    return start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(wall);
}

}  // namespace adaptiflow
