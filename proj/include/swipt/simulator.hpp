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

#ifndef SWIPT_SIMULATOR_HPP
#define SWIPT_SIMULATOR_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>

#include "swipt/channel_model.hpp"
#include "swipt/policy.hpp"

namespace swipt {

enum class PolicyKind { optimal, equal_power, tdipt, exhaustive };

inline const char* to_string(PolicyKind k)
{
    switch (k) {
    case PolicyKind::optimal: return "optimal";
    case PolicyKind::equal_power: return "equal_power";
    case PolicyKind::tdipt: return "tdipt";
    case PolicyKind::exhaustive: return "exhaustive";
    }
    return "unknown";
}

inline PolicyKind parse_policy(std::string_view name)
{
    for (auto k : {PolicyKind::optimal, PolicyKind::equal_power, PolicyKind::tdipt, PolicyKind::exhaustive})
        if (name == to_string(k))
            return k;
    throw InvalidScenario("unknown policy '" + std::string(name) + "'");
}

struct SimConfig {
    ScenarioParams scenario;          // p_c is overwritten by each sweep point
    SiteGeometry site;
    double noise_variance_w = 1e-6;   // total receiver noise, W
    std::vector<double> p_c_dbm;      // sweep axis
    std::size_t trials = 200;
    std::vector<PolicyKind> policies{PolicyKind::optimal};
    std::uint64_t seed = 1;
    std::size_t threads = 0;          // 0: hardware concurrency

    void validate() const
    {
        scenario.validate();
        if (trials < 1)
            throw InvalidScenario("sim: trials must be >= 1");
        if (p_c_dbm.empty())
            throw InvalidScenario("sim: p_c sweep must be nonempty");
        if (policies.empty())
            throw InvalidScenario("sim: at least one policy is required");
        if (!(noise_variance_w > 0.0))
            throw InvalidScenario("sim: noise variance must be positive");
        const std::size_t expected = scenario.user_mode == UserMode::single ? 1 : scenario.K;
        if (site.distances.size() != expected)
            throw InvalidScenario("sim: geometry table needs one distance per mobile");
        for (double d : site.distances)
            if (!(d > 0.0))
                throw InvalidScenario("sim: distances must be positive");
        if (!(site.carrier_hz > 0.0))
            throw InvalidScenario("sim: carrier frequency must be positive");
        for (auto k : policies)
            if (k == PolicyKind::exhaustive &&
                !(scenario.user_mode == UserMode::multi && scenario.it_direction == LinkDirection::uplink &&
                  scenario.rate_mode == RateMode::variable))
                throw InvalidScenario("sim: the exhaustive policy exists only for multi-user variable-rate uplink");
    }

    /// Circuit power of sweep point i in noise units.
    double p_c_normalized(std::size_t i) const { return dbm_to_watts(p_c_dbm[i]) / noise_variance_w; }
};

struct CurvePoint {
    double p_c_dbm = 0.0;
    double mean_se = 0.0;
    double std_se = 0.0;
    std::size_t trials = 0;
};

struct Curve {
    std::string policy;
    std::vector<CurvePoint> points; // ascending p_c
};

struct CurveSet {
    std::vector<Curve> curves; // sorted by policy name

    const Curve* find(std::string_view policy) const
    {
        for (const auto& c : curves)
            if (c.policy == policy)
                return &c;
        return nullptr;
    }
};

/// No power control: P_n = p_t / K, minimum diversion to the harvester for
/// variable rate, the closed-form threshold ratio for fixed rate, and an even
/// split of the uplink budget.
inline ThroughputReport equal_power_solve(const ScenarioParams& p, const ChannelRealization& ch)
{
    p.validate();
    Allocation a;
    const double P = p.p_t / static_cast<double>(p.K);
    a.downlink_powers.assign(p.K, P);

    if (p.it_direction == LinkDirection::downlink) {
        detail::require_downlink(ch, p, "equal_power_solve");
        if (p.user_mode == UserMode::single) {
            double received = 0.0;
            for (double h : ch.h)
                received += P * h;
            double beta = 0.0;
            if (p.rate_mode == RateMode::variable)
                beta = received > 0.0 ? std::max(0.0, 1.0 - p.p_c / received) : 0.0;
            else
                beta = splitting_ratio(p, p.K).beta;
            a.beta = {beta};
        } else {
            a.beta.assign(p.K, 0.0);
            const double fixed_beta = p.rate_mode == RateMode::fixed ? splitting_ratio(p, 1).beta : 0.0;
            for (std::size_t n = 0; n < p.K; ++n) {
                const double received = P * ch.h[n];
                a.beta[n] = p.rate_mode == RateMode::fixed
                                ? fixed_beta
                                : (received > 0.0 ? std::max(0.0, 1.0 - p.p_c / received) : 0.0);
            }
        }
        return evaluate_throughput(a, ch, p);
    }

    detail::require_uplink(ch, p, "equal_power_solve");
    a.uplink_powers.assign(p.K, 0.0);
    if (p.user_mode == UserMode::single) {
        double harvested = 0.0;
        for (double g : ch.g_prime)
            harvested += P * g;
        const double budget = std::max(0.0, harvested - p.p_c);
        a.uplink_powers.assign(p.K, budget / static_cast<double>(p.K));
    } else {
        a.uplink_powers = detail::surplus_uplink(a.downlink_powers, ch, p.p_c);
    }
    return evaluate_throughput(a, ch, p);
}

namespace detail {

inline ThroughputReport halved(ThroughputReport r, std::size_t K)
{
    for (auto& x : r.stream_rates)
        x *= 0.5;
    return make_report(std::move(r.stream_rates), K);
}

/// Information half of the downlink TD-IPT slot over the given sub-channels,
/// decoded at beta = 1 so the SNR is P h.
inline std::vector<double> tdipt_downlink_rates(const ScenarioParams& p, std::span<const double> h,
                                                std::span<const std::size_t> served)
{
    std::vector<double> rates(h.size(), 0.0);
    if (served.empty())
        return rates;
    std::vector<double> g(served.size());
    for (std::size_t i = 0; i < served.size(); ++i)
        g[i] = h[served[i]];
    if (p.rate_mode == RateMode::variable) {
        const auto wf = waterfill(g, p.p_t);
        for (std::size_t i = 0; i < served.size(); ++i)
            rates[served[i]] = std::log2(1.0 + wf.powers[i] * g[i]);
    } else {
        const auto order = descending_order(g);
        std::vector<double> costs(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            costs[i] = p.theta / g[order[i]];
        const auto inv = greedy_inversion(costs, p.p_t);
        for (std::size_t i = 0; i < inv.count; ++i)
            rates[served[order[i]]] = std::log2(1.0 + p.theta);
    }
    return rates;
}

} // namespace detail

/// Time-division baseline: the first half slot carries only power, the
/// second only information. Harvested energy must cover the circuit over the
/// whole slot and all rates carry the factor 1/2.
inline ThroughputReport tdipt_solve(const ScenarioParams& p, const ChannelRealization& ch)
{
    p.validate();
    if (p.it_direction == LinkDirection::downlink) {
        detail::require_downlink(ch, p, "tdipt_solve");
        for (double g : ch.h)
            if (!(g > 0.0))
                throw InvalidScenario("tdipt_solve: gains must be strictly positive");
        std::vector<std::size_t> served;
        if (p.user_mode == UserMode::single) {
            const double h_max = *std::max_element(ch.h.begin(), ch.h.end());
            if (at_least(p.p_t * h_max, 2.0 * p.p_c)) {
                served.resize(p.K);
                std::iota(served.begin(), served.end(), std::size_t{0});
            }
        } else {
            // Power half: invert 2 p_c / h_n, strongest mobiles first.
            const auto order = detail::descending_order(ch.h);
            std::vector<double> costs(p.K);
            for (std::size_t i = 0; i < p.K; ++i)
                costs[i] = 2.0 * p.p_c / ch.h[order[i]];
            const auto inv = greedy_inversion(costs, p.p_t);
            served.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(inv.count));
            std::sort(served.begin(), served.end());
        }
        auto rates = detail::tdipt_downlink_rates(p, ch.h, served);
        return detail::halved(detail::make_report(std::move(rates), p.K), p.K);
    }

    // Uplink: the whole array serves each phase, doubling g' and g; the
    // circuit energy of the full slot doubles the effective p_c.
    detail::require_uplink(ch, p, "tdipt_solve");
    ChannelRealization doubled = ch;
    for (auto& g : doubled.g_prime)
        g *= 2.0;
    for (auto& g : doubled.g_up)
        g *= 2.0;
    ScenarioParams q = p;
    q.p_c = 2.0 * p.p_c;
    const auto alloc = solve_policy(doubled, q);
    return detail::halved(evaluate_throughput(alloc, doubled, q), p.K);
}

/// Throughput of one policy on one realization.
inline ThroughputReport evaluate_policy(PolicyKind kind, const ScenarioParams& p, const ChannelRealization& ch)
{
    switch (kind) {
    case PolicyKind::optimal: return evaluate_throughput(solve_policy(ch, p), ch, p);
    case PolicyKind::equal_power: return equal_power_solve(p, ch);
    case PolicyKind::tdipt: return tdipt_solve(p, ch);
    case PolicyKind::exhaustive: return evaluate_throughput(exhaustive_schedule_mu_ul_variable(ch, p), ch, p);
    }
    throw InvalidScenario("evaluate_policy: unknown policy");
}

/// Stream index of trial t; the same realization is reused at every sweep
/// point so curves compare matched channels.
inline Rng trial_rng(std::uint64_t master_seed, std::size_t trial)
{
    return make_rng(master_seed, static_cast<std::uint64_t>(trial));
}

/// Spectral efficiencies indexed [trial][point][policy].
using TrialTable = std::vector<std::vector<std::vector<double>>>;

inline TrialTable run_trials(const SimConfig& cfg)
{
    cfg.validate();
    const std::size_t T = cfg.trials;
    const std::size_t points = cfg.p_c_dbm.size();
    TrialTable table(T, std::vector<std::vector<double>>(points, std::vector<double>(cfg.policies.size(), 0.0)));

    auto run_one = [&](std::size_t t) {
        auto rng = trial_rng(cfg.seed, t);
        const auto ch = draw_realization(cfg.scenario, cfg.site, cfg.noise_variance_w, rng);
        ScenarioParams p = cfg.scenario;
        for (std::size_t i = 0; i < points; ++i) {
            p.p_c = cfg.p_c_normalized(i);
            for (std::size_t j = 0; j < cfg.policies.size(); ++j)
                table[t][i][j] = evaluate_policy(cfg.policies[j], p, ch).spectral_efficiency;
        }
    };

    std::size_t workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    workers = std::min(workers, T);
    if (workers <= 1) {
        for (std::size_t t = 0; t < T; ++t)
            run_one(t);
        return table;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < T; t = next++) {
                try {
                    run_one(t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
    return table;
}

/// Monte Carlo sweep. The result depends only on the configuration and the
/// master seed; trials are reduced in index order.
inline CurveSet run_sweep(const SimConfig& cfg)
{
    const auto table = run_trials(cfg);
    const std::size_t T = cfg.trials;

    std::vector<std::size_t> point_order(cfg.p_c_dbm.size());
    std::iota(point_order.begin(), point_order.end(), std::size_t{0});
    std::stable_sort(point_order.begin(), point_order.end(),
                     [&](std::size_t a, std::size_t b) { return cfg.p_c_dbm[a] < cfg.p_c_dbm[b]; });

    CurveSet out;
    for (std::size_t j = 0; j < cfg.policies.size(); ++j) {
        Curve c;
        c.policy = to_string(cfg.policies[j]);
        if (out.find(c.policy))
            continue;
        for (std::size_t i : point_order) {
            double mean = 0.0;
            for (std::size_t t = 0; t < T; ++t)
                mean += table[t][i][j];
            mean /= static_cast<double>(T);
            double var = 0.0;
            for (std::size_t t = 0; t < T; ++t)
                var += (table[t][i][j] - mean) * (table[t][i][j] - mean);
            const double sd = T > 1 ? std::sqrt(var / static_cast<double>(T - 1)) : 0.0;
            c.points.push_back({cfg.p_c_dbm[i], mean, sd, T});
        }
        out.curves.push_back(std::move(c));
    }
    std::sort(out.curves.begin(), out.curves.end(),
              [](const Curve& a, const Curve& b) { return a.policy < b.policy; });
    return out;
}

/// First p_c (dBm, linearly interpolated) at which the curve falls to
/// `fraction` of its first point; nullopt if it never does.
inline std::optional<double> crossing_dbm(const Curve& c, double fraction)
{
    if (c.points.empty())
        return std::nullopt;
    const double level = fraction * c.points.front().mean_se;
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const auto& a = c.points[i - 1];
        const auto& b = c.points[i];
        if (b.mean_se <= level) {
            if (a.mean_se == b.mean_se)
                return b.p_c_dbm;
            const double w = (a.mean_se - level) / (a.mean_se - b.mean_se);
            return a.p_c_dbm + w * (b.p_c_dbm - a.p_c_dbm);
        }
    }
    return std::nullopt;
}

} // namespace swipt

#endif // SWIPT_SIMULATOR_HPP
