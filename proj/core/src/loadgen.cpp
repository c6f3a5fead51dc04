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

#include "adaptiflow/loadgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace adaptiflow::loadgen {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view s, double& out)
{
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && end == s.data() + s.size() && std::isfinite(out);
}

bool is_header(std::string_view line)
{
    std::string lower;
    for (char c : line) {
        if (c != ' ' && c != '\t') lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return lower == "time,arrivals";
}

std::string shortest(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

LoadProfile::LoadProfile(std::string name, std::vector<ProfilePoint> points)
    : name_(std::move(name)), points_(std::move(points))
{
    if (points_.empty()) throw std::invalid_argument("load profile needs at least one point");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].time_s) || !std::isfinite(points_[i].arrivals_per_s)) {
            throw std::invalid_argument("load profile values must be finite");
        }
        if (points_[i].arrivals_per_s < 0) throw std::invalid_argument("negative arrival rate");
        if (i > 0 && !(points_[i].time_s > points_[i - 1].time_s)) {
            throw std::invalid_argument("profile time must be strictly increasing");
        }
    }
}

LoadProfile LoadProfile::parse(std::string_view text, std::string name)
{
    std::vector<ProfilePoint> points;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (!seen_content && is_header(line)) {
            seen_content = true;
            continue;
        }
        seen_content = true;

        auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw MalformedLine(line_no, "expected two comma-separated columns");
        }
        ProfilePoint p;
        if (!parse_number(line.substr(0, comma), p.time_s)) throw MalformedLine(line_no, "bad time");
        if (!parse_number(line.substr(comma + 1), p.arrivals_per_s)) {
            throw MalformedLine(line_no, "bad arrival rate");
        }
        if (p.arrivals_per_s < 0) throw MalformedLine(line_no, "negative arrival rate");
        if (!points.empty() && !(p.time_s > points.back().time_s)) throw NonMonotonicTime(line_no);
        points.push_back(p);
    }
    if (points.empty()) throw MalformedLine(line_no, "no data points");
    return LoadProfile(std::move(name), std::move(points));
}

LoadProfile LoadProfile::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open profile " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.stem().string());
}

LoadProfile LoadProfile::constant(double arrivals_per_s, std::string name)
{
    return LoadProfile(std::move(name), {{0.0, arrivals_per_s}});
}

double LoadProfile::rate_at(double t) const
{
    if (t <= points_.front().time_s) return points_.front().arrivals_per_s;
    if (t >= points_.back().time_s) return points_.back().arrivals_per_s;
    auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double x, const ProfilePoint& p) { return x < p.time_s; });
    auto lo = hi - 1;
    double f = (t - lo->time_s) / (hi->time_s - lo->time_s);
    return lo->arrivals_per_s + f * (hi->arrivals_per_s - lo->arrivals_per_s);
}

double LoadProfile::integral(double a, double b) const
{
    if (b < a) return -integral(b, a);
    // rate_at is linear between consecutive breakpoints, so trapezoids are exact.
    std::vector<double> cuts{a};
    for (const auto& p : points_) {
        if (p.time_s > a && p.time_s < b) cuts.push_back(p.time_s);
    }
    cuts.push_back(b);
    double sum = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        sum += 0.5 * (rate_at(cuts[i - 1]) + rate_at(cuts[i])) * (cuts[i] - cuts[i - 1]);
    }
    return sum;
}

std::string LoadProfile::serialize() const
{
    std::string out = "time,arrivals\n";
    for (const auto& p : points_) out += shortest(p.time_s) + "," + shortest(p.arrivals_per_s) + "\n";
    return out;
}

std::vector<std::int64_t> bucket_counts(const LoadProfile& profile, int duration_s)
{
    std::vector<std::int64_t> counts;
    for (int s = 0; s < duration_s; ++s) {
        counts.push_back(static_cast<std::int64_t>(std::floor(profile.integral(s, s + 1) + 0.5)));
    }
    return counts;
}

std::vector<Request> schedule(const LoadProfile& profile, int duration_s, std::uint64_t seed,
                              const DriverOptions& options)
{
    if (options.client_pool == 0) throw std::invalid_argument("client pool must not be empty");
    std::mt19937_64 rng(seed);
    std::vector<Request> out;
    auto counts = bucket_counts(profile, duration_s);
    for (int s = 0; s < duration_s; ++s) {
        const std::int64_t n = counts[static_cast<std::size_t>(s)];
        const TimestampMs base = static_cast<TimestampMs>(s) * 1000;
        const std::int64_t spacing = n > 0 ? 1000 / n : 0;
        for (std::int64_t i = 0; i < n; ++i) {
            // ceil((i + 0.5) * 1000 / n), always in [1, 1000]
            TimestampMs offset = ((2 * i + 1) * 1000 + 2 * n - 1) / (2 * n);
            if (options.jitter && spacing > 1) {
                std::uniform_int_distribution<std::int64_t> d(-spacing / 2, spacing / 2);
                offset = std::clamp<TimestampMs>(offset + d(rng), 1, 1000);
            }
            std::uint64_t client = rng() % options.client_pool;
            Request r;
            r.at = base + offset;
            r.client_ip = "10.0." + std::to_string(client / 256) + "." + std::to_string(client % 256);
            r.path = options.path;
            out.push_back(std::move(r));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Request& a, const Request& b) { return a.at < b.at; });
    return out;
}

LoadDriver::LoadDriver(const LoadProfile& profile, int duration_s, std::uint64_t seed, DriverOptions options)
    : schedule_(schedule(profile, duration_s, seed, options))
{
}

std::size_t LoadDriver::deliver_until(Transport& transport, const std::string& address, TimestampMs until,
                                      bool inclusive)
{
    std::size_t end = next_;
    while (end < schedule_.size() && (inclusive ? schedule_[end].at <= until : schedule_[end].at < until)) ++end;
    if (end == next_) return 0;

    std::span<const Request> batch(schedule_.data() + next_, end - next_);
    std::vector<Response> responses;
    try {
        responses = transport.send_requests(address, batch);
    } catch (const TargetUnreachable&) {
        responses.assign(batch.size(), Response{ResponseClass::unreachable, {}, 0.0});
    }
    responses.resize(batch.size(), Response{ResponseClass::unreachable, {}, 0.0});
    for (std::size_t i = 0; i < batch.size(); ++i) {
        log_.push_back({batch[i].at, batch[i].client_ip, responses[i].status});
    }
    next_ = end;
    return batch.size();
}

std::vector<RequestLogEntry> drive(const LoadProfile& profile, Transport& transport, const std::string& address,
                                   int duration_s, std::uint64_t seed, const DriverOptions& options)
{
    LoadDriver driver(profile, duration_s, seed, options);
    driver.deliver_until(transport, address, static_cast<TimestampMs>(duration_s) * 1000);
    return driver.log();
}

}  // namespace adaptiflow::loadgen
