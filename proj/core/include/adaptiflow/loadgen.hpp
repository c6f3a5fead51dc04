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

#ifndef ADAPTIFLOW_LOADGEN_HPP_
#define ADAPTIFLOW_LOADGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adaptiflow/errors.hpp"
#include "adaptiflow/node.hpp"

namespace adaptiflow::loadgen {

class MalformedLine : public Error {
public:
    MalformedLine(std::size_t line_no, const std::string& why)
        : Error("malformed line " + std::to_string(line_no) + ": " + why), line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

class NonMonotonicTime : public Error {
public:
    explicit NonMonotonicTime(std::size_t line_no)
        : Error("time not strictly increasing at line " + std::to_string(line_no)),
          line_no_(line_no) {}
    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

struct ProfilePoint {
    double time_s = 0.0;
    double arrivals_per_s = 0.0;

    bool operator==(const ProfilePoint&) const = default;
};

/// Target arrival rate over time, piecewise linear between points and
/// clamped to the end values outside them.
///
/// File format: optional header `time,arrivals`, then `<number>,<number>`
/// per line; LF or CRLF; lines starting with '#' are comments.
class LoadProfile {
public:
    LoadProfile() = default;
    /// Throws std::invalid_argument on an empty, non-monotonic or negative profile.
    LoadProfile(std::string name, std::vector<ProfilePoint> points);

    static LoadProfile parse(std::string_view text, std::string name = {});
    /// Name defaults to the file stem.
    static LoadProfile load(const std::filesystem::path& path);
    /// A single point: the rate everywhere.
    static LoadProfile constant(double arrivals_per_s, std::string name = "constant");

    const std::string& name() const { return name_; }
    const std::vector<ProfilePoint>& points() const { return points_; }

    double rate_at(double t_s) const;
    /// Exact integral of rate_at over [a, b].
    double integral(double a_s, double b_s) const;
    /// Canonical text: header, then shortest round-trip numbers.
    std::string serialize() const;

    bool operator==(const LoadProfile&) const = default;

private:
    std::string name_;
    std::vector<ProfilePoint> points_;
};

/// Requests per 1 s bucket: round-half-up of the integral over the bucket.
std::vector<std::int64_t> bucket_counts(const LoadProfile& profile, int duration_s);

struct DriverOptions {
    /// Seeded jitter inside each bucket; the count per bucket never changes.
    bool jitter = true;
    std::size_t client_pool = 64;
    std::string path = "/";
};

/// Deterministic arrival schedule: the n requests of bucket s are evenly
/// spaced in (s*1000, (s+1)*1000] ms, then optionally jittered within that
/// interval. Sorted by time.
std::vector<Request> schedule(const LoadProfile& profile, int duration_s, std::uint64_t seed,
                              const DriverOptions& options = {});

struct RequestLogEntry {
    TimestampMs at = 0;
    std::string client_ip;
    ResponseClass response = ResponseClass::ok;

    bool operator==(const RequestLogEntry&) const = default;
};

/// Replays a schedule against one address, in chunks driven by the caller.
class LoadDriver {
public:
    LoadDriver(const LoadProfile& profile, int duration_s, std::uint64_t seed,
               DriverOptions options = {});

    /// Sends every pending request with at <= until (or < until when
    /// `inclusive` is false) as one batch. An unreachable target marks each
    /// request unreachable. Returns the number sent.
    std::size_t deliver_until(Transport& transport, const std::string& address, TimestampMs until,
                              bool inclusive = true);

    bool done() const { return next_ == schedule_.size(); }
    std::size_t size() const { return schedule_.size(); }
    const std::vector<RequestLogEntry>& log() const { return log_; }

private:
    std::vector<Request> schedule_;
    std::size_t next_ = 0;
    std::vector<RequestLogEntry> log_;
};

/// Whole-run convenience: schedule and deliver everything in one go.
std::vector<RequestLogEntry> drive(const LoadProfile& profile, Transport& transport,
                                   const std::string& address, int duration_s, std::uint64_t seed,
                                   const DriverOptions& options = {});

}  // namespace adaptiflow::loadgen

#endif  // ADAPTIFLOW_LOADGEN_HPP_
