// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SWIPT_CLI_HPP
#define SWIPT_CLI_HPP

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "swipt/io.hpp"
#include "swipt/oracle.hpp"

namespace swipt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitVerifyFailed = 2;

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Verbosity from SWIPT_LOG (error|warn|info|debug); warn when unset.
inline LogLevel log_level_from_env()
{
    const char* v = std::getenv("SWIPT_LOG");
    if (!v)
        return LogLevel::warn;
    const std::string s(v);
    if (s == "error") return LogLevel::error;
    if (s == "info") return LogLevel::info;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::warn;
}

class Logger {
public:
    Logger(std::ostream& sink, LogLevel level) : sink_(sink), level_(level) {}

    void log(LogLevel at, const std::string& msg) const
    {
        static constexpr const char* names[] = {"error", "warn", "info", "debug"};
        if (static_cast<int>(at) <= static_cast<int>(level_))
            sink_ << "[swipt " << names[static_cast<int>(at)] << "] " << msg << '\n';
    }

private:
    std::ostream& sink_;
    LogLevel level_;
};

namespace detail {

struct CliState {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::vector<std::string> policies;
    std::string format;
    std::optional<double> p_c_dbm;
    bool dump_config = false;
    std::size_t instances = 50;
    std::size_t k = 3;
    double tolerance = 5e-3;
    std::vector<std::string> scenarios;
    bool mu_ul_heuristic = false;
    std::size_t count = 1;
};

inline CliConfig resolve_config(const CliState& st)
{
    CliConfig cfg = st.config_path.empty() ? config_from_json(nlohmann::json{{"schema_version", kSchemaVersion}})
                                           : load_config(st.config_path);
    if (st.seed)
        cfg.sim.seed = *st.seed;
    if (st.trials) {
        if (*st.trials < 1)
            throw ConfigError("--trials must be >= 1");
        cfg.sim.trials = *st.trials;
    }
    if (st.threads)
        cfg.sim.threads = *st.threads;
    if (!st.policies.empty()) {
        cfg.sim.policies.clear();
        try {
            for (const auto& p : st.policies)
                cfg.sim.policies.push_back(parse_policy(p));
        } catch (const InvalidScenario& e) {
            throw ConfigError(e.what());
        }
    }
    if (!st.format.empty())
        cfg.output_format = st.format;
    if (!st.out_path.empty())
        cfg.output_path = st.out_path;
    try {
        cfg.sim.validate();
    } catch (const InvalidScenario& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

/// Run `write` against the file at `path`, or `out` when the path is empty.
template <class F>
void emit(const std::string& path, std::ostream& out, F write)
{
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot open output file '" + path + "'");
    write(f);
    f.flush();
    if (!f)
        throw ConfigError("failed writing output file '" + path + "'");
}

inline int cmd_solve(const CliState& st, std::ostream& out, const Logger& log)
{
    CliConfig cfg = resolve_config(st);
    if (st.dump_config) {
        emit(st.out_path, out, [&](std::ostream& os) { os << config_to_json(cfg).dump(2) << '\n'; });
        return kExitOk;
    }
    auto p = cfg.sim.scenario;
    const double dbm = st.p_c_dbm.value_or(cfg.sim.p_c_dbm.front());
    p.p_c = dbm_to_watts(dbm) / cfg.sim.noise_variance_w;
    auto rng = trial_rng(cfg.sim.seed, 0);
    const auto ch = draw_realization(p, cfg.sim.site, cfg.sim.noise_variance_w, rng);
    log.log(LogLevel::info, "solving " + scenario_tag(p) + " at p_c = " + format_g6(dbm) + " dBm");
    const auto alloc = solve_policy(ch, p);
    const auto report = evaluate_throughput(alloc, ch, p);
    nlohmann::json j;
    j["scenario"] = scenario_tag(p);
    j["p_c_dbm"] = dbm;
    j["channel"] = channel_to_json(ch);
    j["allocation"] = allocation_to_json(alloc, report);
    emit(st.out_path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return kExitOk;
}

inline int cmd_sweep(const CliState& st, std::ostream& out, const Logger& log)
{
    const CliConfig cfg = resolve_config(st);
    log.log(LogLevel::info, "sweep " + scenario_tag(cfg.sim.scenario) + ": " + std::to_string(cfg.sim.trials) +
                                " trials x " + std::to_string(cfg.sim.p_c_dbm.size()) + " points");
    const auto curves = run_sweep(cfg.sim);
    emit(cfg.output_path, out, [&](std::ostream& os) {
        if (cfg.output_format == "svg")
            write_curves_svg(curves, os);
        else
            write_curves_csv(curves, os);
    });
    return kExitOk;
}

inline int cmd_verify(const CliState& st, std::ostream& out, std::ostream& err, const Logger& log)
{
    if (st.k < 1 || st.k > kMaxGridMobiles)
        throw ConfigError("--k must lie in [1, 3] for the continuous grid oracle");
    if (!(st.tolerance >= 0.0))
        throw ConfigError("--tolerance must be nonnegative");
    std::vector<ScenarioParams> shapes;
    for (const auto& s : all_scenario_shapes(st.k))
        if (st.scenarios.empty() || std::find(st.scenarios.begin(), st.scenarios.end(), scenario_tag(s)) != st.scenarios.end())
            shapes.push_back(s);
    if (shapes.empty())
        throw ConfigError("--scenarios matched no scenario tag");

    auto rng = make_rng(st.seed.value_or(1), 0x0eac1e);
    std::vector<OracleInstance> batch;
    std::uint64_t id = 0;
    for (const auto& s : shapes)
        for (std::size_t i = 0; i < st.instances; ++i)
            batch.push_back(random_instance(s, rng, id++));

    VerifyOptions opts;
    opts.tolerance = st.tolerance;
    opts.mu_ul_heuristic = st.mu_ul_heuristic;
    const auto reports = verify(batch, opts);
    std::size_t failures = 0;
    for (const auto& r : reports)
        if (!r.passed) {
            ++failures;
            log.log(LogLevel::warn, "instance " + std::to_string(r.instance_id) + " (" + r.scenario +
                                        ") failed: gap " + format_g6(r.gap));
        }
    if (!st.out_path.empty())
        emit(st.out_path, out, [&](std::ostream& os) { write_verify_csv(reports, os); });
    out << "verified " << reports.size() << " instances, " << failures << " failures\n";
    if (failures > 0) {
        err << "verification failed on " << failures << " instance(s)\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

inline int cmd_channels(const CliState& st, std::ostream& out)
{
    const CliConfig cfg = resolve_config(st);
    emit(st.out_path, out, [&](std::ostream& os) {
        for (std::size_t t = 0; t < st.count; ++t) {
            auto rng = trial_rng(cfg.sim.seed, t);
            const auto ch = draw_realization(cfg.sim.scenario, cfg.sim.site, cfg.sim.noise_variance_w, rng);
            auto j = channel_to_json(ch);
            j["trial"] = t;
            os << j.dump() << '\n';
        }
    });
    return kExitOk;
}

} // namespace detail

/// Command-line entry point. Exit codes: 0 success, 1 usage or config
/// error, 2 verification failures.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    const Logger log(err, log_level_from_env());
    detail::CliState st;
    CLI::App app{"SWIPT power-control engine and simulator", "swipt"};
    app.require_subcommand(1);

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", st.config_path, "JSON scenario configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", st.out_path, "output path (default: stdout)");
        sub->add_option("--seed", st.seed, "master seed");
    };

    auto* solve = app.add_subcommand("solve", "solve one channel realization and print the allocation");
    add_config(solve);
    solve->add_option("--p-c-dbm", st.p_c_dbm, "circuit power in dBm (default: first sweep point)");
    solve->add_flag("--dump-config", st.dump_config, "print the resolved configuration and exit");

    auto* sweep = app.add_subcommand("sweep", "Monte Carlo spectral efficiency versus circuit power");
    add_config(sweep);
    sweep->add_option("--trials", st.trials, "trials per sweep point");
    sweep->add_option("--threads", st.threads, "worker threads (0: all cores)");
    sweep->add_option("--policies", st.policies, "comma-separated: optimal,equal_power,tdipt,exhaustive")
        ->delimiter(',');
    sweep->add_option("--format", st.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));

    auto* ver = app.add_subcommand("verify", "check every policy against the brute-force oracle");
    ver->add_option("--instances", st.instances, "random instances per scenario");
    ver->add_option("--k", st.k, "streams per instance (1..3)");
    ver->add_option("--tolerance", st.tolerance, "relative gap allowed for continuous scenarios");
    ver->add_option("--seed", st.seed, "instance generator seed");
    ver->add_option("--scenarios", st.scenarios, "comma-separated scenario tags, e.g. su_dl_variable")
        ->delimiter(',');
    ver->add_flag("--mu-ul-heuristic", st.mu_ul_heuristic,
                  "certify the prefix scheduler instead of exhaustive scheduling for mu_ul_variable");
    ver->add_option("--out", st.out_path, "CSV report path");

    auto* chans = app.add_subcommand("channels", "dump channel realizations as JSON lines");
    add_config(chans);
    chans->add_option("--count", st.count, "number of realizations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitConfig;
    }

    try {
        if (solve->parsed())
            return detail::cmd_solve(st, out, log);
        if (sweep->parsed())
            return detail::cmd_sweep(st, out, log);
        if (ver->parsed())
            return detail::cmd_verify(st, out, err, log);
        return detail::cmd_channels(st, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

} // namespace swipt

#endif // SWIPT_CLI_HPP
