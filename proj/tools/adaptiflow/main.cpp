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

// adaptiflow: run, validate and compare adaptation scenarios.
//
// Exit status: 0 success, 1 failed assertions or differing reports,
// 2 bad input (unreadable or invalid scenario, profile or report).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adaptiflow/errors.hpp"
#include "adaptiflow/loadgen.hpp"
#include "adaptiflow/runner.hpp"
#include "adaptiflow/scenario.hpp"
#include "adaptiflow/scheduler.hpp"

namespace fs = std::filesystem;
namespace sc = adaptiflow::scenario;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

struct RunArgs {
    std::string scenario;
    std::optional<double> horizon_s;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> interval_ms;
    std::string profile;
    std::string out;
    std::string transport = "loopback";
    bool live = false;
    double time_scale = 1.0;
};

sc::ScenarioReport read_report(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw adaptiflow::Error("cannot open " + path);
    return nlohmann::json::parse(in).get<sc::ScenarioReport>();
}

int run(const RunArgs& args)
{
    auto spec = sc::load_scenario_file(args.scenario);

    sc::RunOptions options;
    options.horizon_s = args.horizon_s;
    options.seed = args.seed;
    options.live = args.live;
    options.time_scale = args.time_scale;
    options.transport = args.transport == "socket" ? sc::TransportKind::socket : sc::TransportKind::loopback;
    // Flag beats environment beats the document.
    if (args.interval_ms) {
        options.interval_ms = *args.interval_ms;
    } else if (std::getenv("EVENT_LISTENING_INTERVAL_MS")) {
        options.interval_ms = adaptiflow::interval_from_environment(spec.interval_ms);
    }
    if (!args.profile.empty()) options.profile = adaptiflow::loadgen::LoadProfile::load(args.profile);

    auto report = sc::run_scenario(spec, options);
    sc::print_timeline(std::cout, report);

    if (!args.out.empty()) {
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw adaptiflow::Error("cannot write " + args.out);
        out << sc::report_document(report);
    }
    return report.passed() ? kOk : kFailed;
}

int validate(const std::string& path)
{
    auto spec = sc::load_scenario_file(path);
    std::cout << path << ": ok (" << spec.name << ", " << spec.nodes.size() << " nodes, "
              << spec.assertions.size() << " assertions)\n";
    return kOk;
}

int diff(const std::string& a_path, const std::string& b_path)
{
    auto d = sc::diff_timelines(read_report(a_path), read_report(b_path));
    std::cout << sc::to_json(d).dump(2) << "\n";
    return d.empty() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Run and inspect decentralized self-adaptation scenarios"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "run a scenario and print its timeline");
    run_cmd->add_option("--scenario", run_args.scenario, "scenario document")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--horizon-s", run_args.horizon_s, "virtual seconds to simulate")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run_args.seed, "load generator seed");
    run_cmd->add_option("--interval-ms", run_args.interval_ms, "observation interval")->check(CLI::PositiveNumber);
    run_cmd->add_option("--profile", run_args.profile, "load profile CSV replacing the document's")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--out", run_args.out, "write the report document here");
    run_cmd->add_option("--transport", run_args.transport, "mesh transport")
        ->check(CLI::IsMember({"loopback", "socket"}));
    run_cmd->add_flag("--live", run_args.live, "real clock and sockets");
    run_cmd->add_option("--time-scale", run_args.time_scale, "logical ms per wall ms in live mode")
        ->check(CLI::PositiveNumber);

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a scenario document");
    validate_cmd->add_option("file", validate_path)->required();

    std::string diff_a, diff_b;
    auto* diff_cmd = app.add_subcommand("diff", "compare two report documents");
    diff_cmd->add_option("report_a", diff_a)->required();
    diff_cmd->add_option("report_b", diff_b)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*run_cmd) return run(run_args);
        if (*validate_cmd) return validate(validate_path);
        if (*diff_cmd) return diff(diff_a, diff_b);
    } catch (const std::exception& e) {
        std::cerr << "adaptiflow: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
