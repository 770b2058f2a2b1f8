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

#ifndef SWIPT_ORACLE_HPP
#define SWIPT_ORACLE_HPP

#include <bit>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>

#include "swipt/channel_model.hpp"
#include "swipt/policy.hpp"

namespace swipt {

inline constexpr std::size_t kMaxGridMobiles = 3;
inline constexpr std::size_t kMaxSubsetMobiles = 20;

/// Grid steps of the continuous oracle: power step = p_t * power_step,
/// beta step = beta_step.
struct GridResolution {
    double power_step = 1e-3;
    double beta_step = 1e-3;
};

struct OracleSolution {
    double objective = 0.0; // exact sum throughput of `allocation`
    Allocation allocation;
};

struct OracleInstance {
    std::uint64_t id = 0;
    ScenarioParams scenario;
    ChannelRealization channel;
};

struct OracleReport {
    std::uint64_t instance_id = 0;
    std::string scenario;
    double oracle_objective = 0.0;
    double policy_objective = 0.0;
    double gap = 0.0; // oracle - policy
    std::size_t oracle_streams = 0;
    std::size_t policy_streams = 0;
    double max_power_difference = 0.0; // discrete scenarios only
    std::vector<std::string> constraint_violations;
    bool passed = false;
};

namespace detail {

inline std::size_t grid_count(double step)
{
    if (!(step > 0.0) || step > 1.0)
        throw InvalidScenario("oracle: grid step must lie in (0, 1]");
    return static_cast<std::size_t>(std::llround(1.0 / step));
}

/// Visit every vector of K nonnegative integers summing to N.
inline void for_each_composition(std::size_t K, std::size_t N, const std::function<void(const std::vector<std::size_t>&)>& f)
{
    std::vector<std::size_t> c(K, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i + 1 == K) {
            c[i] = left;
            f(c);
            return;
        }
        for (std::size_t j = 0; j <= left; ++j) {
            c[i] = j;
            rec(i + 1, left - j);
        }
    };
    rec(0, N);
}

/// Largest grid beta with (1 - beta) * received >= p_c, or -1 if none.
inline double best_grid_beta(double received, double p_c, std::size_t M)
{
    for (std::size_t j = M + 1; j-- > 0;) {
        const double beta = static_cast<double>(j) / static_cast<double>(M);
        if (at_least((1.0 - beta) * received, p_c))
            return beta;
    }
    return -1.0;
}

inline std::size_t stream_count(const ThroughputReport& r)
{
    return static_cast<std::size_t>(std::count_if(r.stream_rates.begin(), r.stream_rates.end(),
                                                  [](double x) { return x > 0.0; }));
}

inline Allocation empty_allocation(const ScenarioParams& p)
{
    Allocation a;
    a.downlink_powers.assign(p.K, 0.0);
    if (p.it_direction == LinkDirection::downlink)
        a.beta.assign(p.user_mode == UserMode::single ? 1 : p.K, 0.0);
    else
        a.uplink_powers.assign(p.K, 0.0);
    return a;
}

/// Solve g(beta) = target for a decreasing g on (0, 1] by bisection.
template <class F>
double bisect_decreasing(F g, double target)
{
    double lo = 0.0, hi = 1.0;
    if (g(hi) >= target)
        return hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= target)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

/// Subset search shared by the discrete oracles: maximize the number of
/// served streams, ties broken by the smallest total cost.
struct SubsetChoice {
    std::uint32_t mask = 0;
    std::size_t count = 0;
    double cost = 0.0;
};

inline SubsetChoice best_subset(std::size_t K, const std::function<std::optional<double>(std::uint32_t)>& cost_of)
{
    if (K > kMaxSubsetMobiles)
        throw InvalidScenario("oracle: too many streams for subset enumeration");
    SubsetChoice best;
    for (std::uint32_t mask = 1; mask < (1u << K); ++mask) {
        const auto cost = cost_of(mask);
        if (!cost)
            continue;
        const auto count = static_cast<std::size_t>(std::popcount(mask));
        if (count > best.count || (count == best.count && *cost < best.cost)) {
            best = {mask, count, *cost};
        }
    }
    return best;
}

// ---- continuous grids ----------------------------------------------------

inline Allocation grid_su_dl(const ChannelRealization& ch, const ScenarioParams& p, GridResolution res)
{
    const std::size_t N = grid_count(res.power_step);
    const std::size_t M = grid_count(res.beta_step);
    const double step = p.p_t / static_cast<double>(N);
    Allocation best = empty_allocation(p);
    double best_rate = -1.0;
    std::vector<double> P(p.K);
    for_each_composition(p.K, N, [&](const std::vector<std::size_t>& c) {
        double received = 0.0;
        for (std::size_t n = 0; n < p.K; ++n) {
            P[n] = step * static_cast<double>(c[n]);
            received += P[n] * ch.h[n];
        }
        const double beta = best_grid_beta(received, p.p_c, M);
        if (beta <= 0.0)
            return;
        const double denom = beta * p.sigma_a2 + p.sigma_b2;
        double rate = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            rate += std::log2(1.0 + beta * P[n] * ch.h[n] / denom);
        if (rate > best_rate) {
            best_rate = rate;
            best.downlink_powers = P;
            best.beta = {beta};
        }
    });
    return best;
}

/// Per-mobile best rate for every power level j * step; the sum over
/// compositions is then exhaustive because the objective is separable.
template <class RateAt>
Allocation grid_separable(const ScenarioParams& p, GridResolution res, RateAt rate_at)
{
    const std::size_t N = grid_count(res.power_step);
    const double step = p.p_t / static_cast<double>(N);
    std::vector<std::vector<double>> table(p.K, std::vector<double>(N + 1));
    for (std::size_t n = 0; n < p.K; ++n)
        for (std::size_t j = 0; j <= N; ++j)
            table[n][j] = rate_at(n, step * static_cast<double>(j));

    std::vector<std::size_t> best_c;
    double best_rate = -1.0;
    for_each_composition(p.K, N, [&](const std::vector<std::size_t>& c) {
        double rate = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            rate += table[n][c[n]];
        if (rate > best_rate) {
            best_rate = rate;
            best_c = c;
        }
    });

    Allocation a = empty_allocation(p);
    for (std::size_t n = 0; n < p.K; ++n)
        a.downlink_powers[n] = step * static_cast<double>(best_c[n]);
    return a;
}

inline Allocation grid_mu_dl(const ChannelRealization& ch, const ScenarioParams& p, GridResolution res)
{
    const std::size_t M = grid_count(res.beta_step);
    auto beta_for = [&](std::size_t n, double P) { return best_grid_beta(P * ch.h[n], p.p_c, M); };
    auto rate_at = [&](std::size_t n, double P) {
        const double beta = beta_for(n, P);
        if (beta <= 0.0)
            return 0.0;
        return std::log2(1.0 + beta * P * ch.h[n] / (beta * p.sigma_a2 + p.sigma_b2));
    };
    Allocation a = grid_separable(p, res, rate_at);
    for (std::size_t n = 0; n < p.K; ++n)
        a.beta[n] = std::max(0.0, beta_for(n, a.downlink_powers[n]));
    return a;
}

inline Allocation grid_mu_ul(const ChannelRealization& ch, const ScenarioParams& p, GridResolution res)
{
    auto rate_at = [&](std::size_t n, double P) {
        const double harvested = P * ch.g_prime[n];
        if (!at_least(harvested, p.p_c))
            return 0.0;
        return std::log2(1.0 + std::max(0.0, harvested - p.p_c) * ch.g_up[n]);
    };
    Allocation a = grid_separable(p, res, rate_at);
    a.uplink_powers = surplus_uplink(a.downlink_powers, ch, p.p_c);
    return a;
}

inline Allocation grid_su_ul(const ChannelRealization& ch, const ScenarioParams& p, GridResolution res)
{
    const std::size_t N = grid_count(res.power_step);
    const double step = p.p_t / static_cast<double>(N);
    Allocation a = empty_allocation(p);

    // The uplink rate only depends on the downlink through the harvested
    // surplus, so the downlink grid is searched for the largest surplus first.
    double best_harvest = -1.0;
    for_each_composition(p.K, N, [&](const std::vector<std::size_t>& c) {
        double harvested = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            harvested += step * static_cast<double>(c[n]) * ch.g_prime[n];
        if (harvested > best_harvest) {
            best_harvest = harvested;
            for (std::size_t n = 0; n < p.K; ++n)
                a.downlink_powers[n] = step * static_cast<double>(c[n]);
        }
    });
    if (!at_least(best_harvest, p.p_c))
        return a;

    const double budget = std::max(0.0, best_harvest - p.p_c);
    const double q_step = budget / static_cast<double>(N);
    double best_rate = -1.0;
    for_each_composition(p.K, N, [&](const std::vector<std::size_t>& c) {
        double rate = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            rate += std::log2(1.0 + q_step * static_cast<double>(c[n]) * ch.g_up[n]);
        if (rate > best_rate) {
            best_rate = rate;
            for (std::size_t n = 0; n < p.K; ++n)
                a.uplink_powers[n] = q_step * static_cast<double>(c[n]);
        }
    });
    return a;
}

// ---- discrete enumerations -----------------------------------------------

inline Allocation enumerate_su_dl_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    // For a served set S at ratio beta every member is inverted to SNR theta;
    // the harvest then decreases in beta, so the cheapest ratio meets p_c with
    // equality.
    auto beta_for = [&](std::size_t count) {
        auto harvest = [&](double beta) {
            if (beta <= 0.0)
                return std::numeric_limits<double>::infinity();
            return (1.0 - beta) * static_cast<double>(count) * p.theta * (beta * p.sigma_a2 + p.sigma_b2) / beta;
        };
        return p.p_c == 0.0 ? 1.0 : bisect_decreasing(harvest, p.p_c);
    };
    auto power_of = [&](double beta, std::size_t n) {
        return p.theta * (beta * p.sigma_a2 + p.sigma_b2) / (beta * ch.h[n]);
    };

    const auto choice = best_subset(p.K, [&](std::uint32_t mask) -> std::optional<double> {
        const double beta = beta_for(static_cast<std::size_t>(std::popcount(mask)));
        double total = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            if (mask & (1u << n)) {
                if (!(ch.h[n] > 0.0))
                    return std::nullopt;
                total += power_of(beta, n);
            }
        if (total > p.p_t)
            return std::nullopt;
        return total;
    });

    Allocation a = empty_allocation(p);
    if (choice.count == 0)
        return a;
    const double beta = beta_for(choice.count);
    a.beta = {beta};
    for (std::size_t n = 0; n < p.K; ++n)
        if (choice.mask & (1u << n))
            a.downlink_powers[n] = power_of(beta, n);
    return a;
}

inline Allocation enumerate_mu_dl_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    // Per mobile, minimum power with SNR >= theta and harvest >= p_c; the
    // ratio solves both with equality and does not depend on the gain.
    auto snr_over_received = [&](double beta) { return beta / (beta * p.sigma_a2 + p.sigma_b2); };
    double beta = 1.0;
    if (p.p_c > 0.0) {
        // harvest / (received * snr / theta) = (1 - beta)(beta sa + sb) theta / beta, decreasing in beta
        auto harvest_at_threshold = [&](double b) {
            if (b <= 0.0)
                return std::numeric_limits<double>::infinity();
            return (1.0 - b) * p.theta / snr_over_received(b);
        };
        beta = bisect_decreasing(harvest_at_threshold, p.p_c);
    }
    auto power_of = [&](std::size_t n) { return p.theta / (snr_over_received(beta) * ch.h[n]); };

    const auto choice = best_subset(p.K, [&](std::uint32_t mask) -> std::optional<double> {
        double total = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            if (mask & (1u << n)) {
                if (!(ch.h[n] > 0.0))
                    return std::nullopt;
                total += power_of(n);
            }
        if (total > p.p_t)
            return std::nullopt;
        return total;
    });

    Allocation a = empty_allocation(p);
    a.beta.assign(p.K, beta);
    for (std::size_t n = 0; n < p.K; ++n)
        if (choice.mask & (1u << n))
            a.downlink_powers[n] = power_of(n);
    return a;
}

inline Allocation enumerate_su_ul_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    Allocation a = empty_allocation(p);
    // The harvest is linear in P, so one of the simplex vertices is optimal.
    std::size_t tone = 0;
    for (std::size_t n = 1; n < p.K; ++n)
        if (ch.g_prime[n] > ch.g_prime[tone])
            tone = n;
    a.downlink_powers[tone] = p.p_t;
    const double harvested = p.p_t * ch.g_prime[tone];
    if (!at_least(harvested, p.p_c))
        return a;
    const double budget = std::max(0.0, harvested - p.p_c);

    const auto choice = best_subset(p.K, [&](std::uint32_t mask) -> std::optional<double> {
        double total = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            if (mask & (1u << n)) {
                if (!(ch.g_up[n] > 0.0))
                    return std::nullopt;
                total += p.theta / ch.g_up[n];
            }
        if (total > budget)
            return std::nullopt;
        return total;
    });
    for (std::size_t n = 0; n < p.K; ++n)
        if (choice.mask & (1u << n))
            a.uplink_powers[n] = p.theta / ch.g_up[n];
    return a;
}

inline Allocation enumerate_mu_ul_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    auto cost_of = [&](std::size_t n) { return (p.theta / ch.g_up[n] + p.p_c) / ch.g_prime[n]; };
    const auto choice = best_subset(p.K, [&](std::uint32_t mask) -> std::optional<double> {
        double total = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            if (mask & (1u << n)) {
                if (!(ch.g_up[n] > 0.0) || !(ch.g_prime[n] > 0.0))
                    return std::nullopt;
                total += cost_of(n);
            }
        if (total > p.p_t)
            return std::nullopt;
        return total;
    });
    Allocation a = empty_allocation(p);
    for (std::size_t n = 0; n < p.K; ++n)
        if (choice.mask & (1u << n)) {
            a.downlink_powers[n] = cost_of(n);
            a.uplink_powers[n] = p.theta / ch.g_up[n];
        }
    return a;
}

inline bool continuous_scenario(const ScenarioParams& p) { return p.rate_mode == RateMode::variable; }

} // namespace detail

/// Brute-force optimum of the scenario's exact throughput. Continuous
/// problems are searched on a grid (K <= 3); fixed-rate problems by subset
/// enumeration.
inline OracleSolution grid_search_allocation(const ScenarioParams& p, const ChannelRealization& ch,
                                             GridResolution res)
{
    p.validate();
    if (p.it_direction == LinkDirection::downlink)
        detail::require_downlink(ch, p, "grid_search_allocation");
    else
        detail::require_uplink(ch, p, "grid_search_allocation");
    if (detail::continuous_scenario(p) && p.K > kMaxGridMobiles)
        throw InvalidScenario("grid_search_allocation: continuous grid supports at most 3 streams");

    OracleSolution s;
    const bool su = p.user_mode == UserMode::single;
    if (p.it_direction == LinkDirection::downlink) {
        if (p.rate_mode == RateMode::variable)
            s.allocation = su ? detail::grid_su_dl(ch, p, res) : detail::grid_mu_dl(ch, p, res);
        else
            s.allocation = su ? detail::enumerate_su_dl_fixed(ch, p) : detail::enumerate_mu_dl_fixed(ch, p);
    } else {
        if (p.rate_mode == RateMode::variable)
            s.allocation = su ? detail::grid_su_ul(ch, p, res) : detail::grid_mu_ul(ch, p, res);
        else
            s.allocation = su ? detail::enumerate_su_ul_fixed(ch, p) : detail::enumerate_mu_ul_fixed(ch, p);
    }
    s.objective = evaluate_throughput(s.allocation, ch, p).sum_rate;
    s.allocation.feasible = s.objective > 0.0;
    return s;
}

inline OracleSolution grid_search_allocation(const ScenarioParams& p, const ChannelRealization& ch,
                                             double resolution)
{
    return grid_search_allocation(p, ch, GridResolution{resolution, resolution});
}

struct VerifyOptions {
    double tolerance = 5e-3;   // relative gap allowed for continuous scenarios
    GridResolution resolution{2e-3, 5e-3};
    // Multi-user variable-rate uplink: certify the exhaustive scheduler
    // (default) or the prefix heuristic.
    bool mu_ul_heuristic = false;
};

/// Policy that `verify` certifies for the scenario.
inline Allocation verified_policy(const ChannelRealization& ch, const ScenarioParams& p, const VerifyOptions& opts)
{
    if (p.user_mode == UserMode::multi && p.it_direction == LinkDirection::uplink &&
        p.rate_mode == RateMode::variable && !opts.mu_ul_heuristic)
        return exhaustive_schedule_mu_ul_variable(ch, p);
    return solve_policy(ch, p);
}

/// Run the matching policy and the oracle on every instance.
inline std::vector<OracleReport> verify(std::span<const OracleInstance> batch, VerifyOptions opts = {})
{
    std::vector<OracleReport> reports;
    reports.reserve(batch.size());
    for (const auto& inst : batch) {
        const auto& p = inst.scenario;
        OracleReport r;
        r.instance_id = inst.id;
        r.scenario = scenario_tag(p);
        try {
            const auto oracle = grid_search_allocation(p, inst.channel, opts.resolution);
            const auto policy = verified_policy(inst.channel, p, opts);
            const auto oracle_rep = evaluate_throughput(oracle.allocation, inst.channel, p);
            const auto policy_rep = evaluate_throughput(policy, inst.channel, p);
            r.oracle_objective = oracle.objective;
            r.policy_objective = policy_rep.sum_rate;
            r.gap = r.oracle_objective - r.policy_objective;
            r.oracle_streams = detail::stream_count(oracle_rep);
            r.policy_streams = detail::stream_count(policy_rep);
            r.constraint_violations = constraint_violations(policy, inst.channel, p);
            if (detail::continuous_scenario(p)) {
                r.passed = r.gap <= opts.tolerance * std::max(r.oracle_objective, 0.0);
            } else {
                for (std::size_t n = 0; n < p.K; ++n) {
                    r.max_power_difference = std::max(
                        r.max_power_difference, std::abs(oracle.allocation.downlink_powers[n] - policy.downlink_powers[n]));
                    if (p.it_direction == LinkDirection::uplink)
                        r.max_power_difference = std::max(
                            r.max_power_difference, std::abs(oracle.allocation.uplink_powers[n] - policy.uplink_powers[n]));
                }
                // An unserved instance carries no power information to compare.
                const bool powers_match = r.oracle_streams == 0 || r.max_power_difference <= 1e-9;
                r.passed = r.gap == 0.0 && r.oracle_streams == r.policy_streams && powers_match;
            }
            r.passed = r.passed && r.constraint_violations.empty();
        } catch (const Error& e) {
            r.constraint_violations.emplace_back(e.what());
            r.passed = false;
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

/// Random instance for the abstract (noise-normalized) problem. Gains and
/// theta are log-uniform, p_c is uniform up to the largest harvestable power.
template <class Engine>
OracleInstance random_instance(ScenarioParams shape, Engine& rng, std::uint64_t id = 0)
{
    auto log_uniform = [&](double lo, double hi) {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng));
    };
    auto gains = [&] {
        std::vector<double> g(shape.K);
        for (auto& x : g)
            x = log_uniform(0.1, 10.0);
        return g;
    };

    OracleInstance inst;
    inst.id = id;
    inst.scenario = shape;
    auto& p = inst.scenario;
    p.p_t = log_uniform(1.0, 10.0);
    p.theta = log_uniform(0.1, 10.0);
    p.sigma_a2 = 0.9;
    p.sigma_b2 = 0.1;
    if (p.it_direction == LinkDirection::downlink) {
        inst.channel = ChannelRealization::downlink(gains());
        const double h_max = *std::max_element(inst.channel.h.begin(), inst.channel.h.end());
        p.p_c = std::uniform_real_distribution<double>(0.0, p.p_t * h_max)(rng);
    } else {
        auto g_prime = gains();
        inst.channel = ChannelRealization::uplink(g_prime, gains());
        const double g_max = *std::max_element(g_prime.begin(), g_prime.end());
        p.p_c = std::uniform_real_distribution<double>(0.0, p.p_t * g_max)(rng);
    }
    return inst;
}

/// All eight scenario shapes with K streams each.
inline std::vector<ScenarioParams> all_scenario_shapes(std::size_t K)
{
    std::vector<ScenarioParams> out;
    for (auto u : {UserMode::single, UserMode::multi})
        for (auto d : {LinkDirection::downlink, LinkDirection::uplink})
            for (auto r : {RateMode::variable, RateMode::fixed}) {
                ScenarioParams p;
                p.user_mode = u;
                p.it_direction = d;
                p.rate_mode = r;
                p.K = K;
                out.push_back(p);
            }
    return out;
}

/// Verification report as CSV: one row per instance.
inline void write_verify_csv(std::span<const OracleReport> reports, std::ostream& os)
{
    os << "instance,scenario,oracle_objective,policy_objective,gap,passed\n";
    const auto old_precision = os.precision(10);
    for (const auto& r : reports)
        os << r.instance_id << ',' << r.scenario << ',' << r.oracle_objective << ',' << r.policy_objective << ','
           << r.gap << ',' << (r.passed ? "pass" : "fail") << '\n';
    os.precision(old_precision);
}

} // namespace swipt

#endif // SWIPT_ORACLE_HPP
