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

#ifndef ADAPTIFLOW_CLOCK_HPP_
#define ADAPTIFLOW_CLOCK_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>

namespace adaptiflow {

/// Logical time in milliseconds on the harness clock.
using TimestampMs = std::int64_t;

class Clock {
public:
    virtual ~Clock() = default;
    /// Monotonically non-decreasing.
    virtual TimestampMs now() const = 0;
};

/// Deterministic clock moved explicitly by the run loop or by tests.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(TimestampMs start = 0) : now_(start) {}

    TimestampMs now() const override { return now_.load(std::memory_order_acquire); }

    /// Throws std::invalid_argument when `t` lies in the past.
    void advance_to(TimestampMs t);
    void advance_by(TimestampMs delta);

private:
    std::atomic<TimestampMs> now_;
};

/// Wall clock reporting scaled milliseconds since construction. A scale of
/// 10 makes one wall second count as ten logical seconds.
class SystemClock final : public Clock {
public:
    explicit SystemClock(double time_scale = 1.0);

    TimestampMs now() const override;
    std::chrono::steady_clock::time_point wall_time_of(TimestampMs t) const;
    double time_scale() const { return scale_; }

private:
    std::chrono::steady_clock::time_point start_;
    double scale_;
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_CLOCK_HPP_
