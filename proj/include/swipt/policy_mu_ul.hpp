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

#ifndef SWIPT_POLICY_MU_UL_HPP
#define SWIPT_POLICY_MU_UL_HPP

#include <cstdint>

#include "swipt/allocation_core.hpp"

namespace swipt {

inline constexpr std::size_t kMaxExhaustiveMobiles = 20;

/// Multi-user uplink sum throughput. Every powered mobile spends all of its
/// surplus P_n g'_n - p_c on its own uplink stream.
inline ThroughputReport throughput_mu_ul(const Allocation& alloc, const ChannelRealization& ch,
                                         const ScenarioParams& p)
{
    detail::require_uplink(ch, p, "throughput_mu_ul");
    if (alloc.downlink_powers.size() != p.K || alloc.uplink_powers.size() != p.K)
        throw InvalidScenario("throughput_mu_ul: allocation dimensions do not match the channel");

    std::vector<double> rates(p.K, 0.0);
    for (std::size_t n = 0; n < p.K; ++n) {
        const double harvested = alloc.downlink_powers[n] * ch.g_prime[n];
        if (!at_least(harvested, p.p_c))
            continue;
        if (p.rate_mode == RateMode::variable) {
            rates[n] = std::log2(1.0 + std::max(0.0, harvested - p.p_c) * ch.g_up[n]);
        } else if (alloc.uplink_powers[n] > 0.0 && at_least(alloc.uplink_powers[n] * ch.g_up[n], p.theta)) {
            rates[n] = std::log2(1.0 + p.theta);
        }
    }
    return detail::make_report(std::move(rates), p.K);
}

namespace detail {

/// Uplink powers implied by the downlink allocation: all available surplus.
inline std::vector<double> surplus_uplink(std::span<const double> P, const ChannelRealization& ch, double p_c)
{
    std::vector<double> Q(P.size(), 0.0);
    for (std::size_t n = 0; n < P.size(); ++n)
        if (P[n] > 0.0)
            Q[n] = std::max(0.0, P[n] * ch.g_prime[n] - p_c);
    return Q;
}

struct ScheduledWaterfill {
    double rate = 0.0;
    std::vector<double> powers; // downlink powers in original indexing
};

/// Water-fill the round-trip gains g g' of a scheduled set after paying each
/// member's circuit offset p_c / g'. Members left without surplus still pay.
inline ScheduledWaterfill waterfill_scheduled(const ChannelRealization& ch, const ScenarioParams& p,
                                              std::span<const std::size_t> members)
{
    ScheduledWaterfill out;
    out.powers.assign(ch.size(), 0.0);
    double budget = p.p_t;
    std::vector<double> composite(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        const std::size_t n = members[i];
        budget -= p.p_c / ch.g_prime[n];
        composite[i] = ch.g_up[n] * ch.g_prime[n];
    }
    const auto wf = waterfill(composite, std::max(0.0, budget));
    for (std::size_t i = 0; i < members.size(); ++i) {
        const std::size_t n = members[i];
        out.powers[n] = wf.powers[i] + p.p_c / ch.g_prime[n];
        out.rate += std::log2(1.0 + wf.powers[i] * composite[i]);
    }
    return out;
}

inline void require_positive_uplink(const ChannelRealization& ch, const char* what)
{
    for (std::size_t n = 0; n < ch.size(); ++n)
        if (!(ch.g_prime[n] > 0.0) || !(ch.g_up[n] > 0.0))
            throw InvalidScenario(std::string(what) + ": gains must be strictly positive");
}

} // namespace detail

/// Variable-rate multi-user uplink (sub-optimal scheduling): activate the k
/// mobiles with the strongest power tones, water-fill the round-trip gains,
/// and keep the k with the highest sum rate.
inline Allocation solve_mu_ul_variable(const ChannelRealization& ch, const ScenarioParams& p)
{
    p.validate();
    detail::require_uplink(ch, p, "solve_mu_ul_variable");
    detail::require_positive_uplink(ch, "solve_mu_ul_variable");

    const auto order = detail::descending_order(ch.g_prime);
    std::size_t z_max = 0;
    double circuit = 0.0;
    for (std::size_t z = 1; z <= p.K; ++z) {
        circuit += p.p_c / ch.g_prime[order[z - 1]];
        if (circuit > p.p_t)
            break;
        z_max = z;
    }

    std::size_t k_star = 0;
    detail::ScheduledWaterfill best;
    best.powers.assign(p.K, 0.0);
    best.rate = -1.0;
    for (std::size_t k = 1; k <= z_max; ++k) {
        auto candidate = detail::waterfill_scheduled(ch, p, std::span(order).first(k));
        if (candidate.rate > best.rate) {
            best = std::move(candidate);
            k_star = k;
        }
    }

    Allocation alloc;
    alloc.downlink_powers = k_star > 0 ? best.powers : std::vector<double>(p.K, 0.0);
    alloc.uplink_powers = detail::surplus_uplink(alloc.downlink_powers, ch, p.p_c);
    alloc.feasible = k_star > 0;
    alloc.diagnostics.stream_count = k_star;
    alloc.diagnostics.permutation = order;
    return alloc;
}

/// Optimal-scheduling reference: every subset whose circuit offsets fit the
/// budget is water-filled and the best sum rate wins. O(2^K).
inline Allocation exhaustive_schedule_mu_ul_variable(const ChannelRealization& ch, const ScenarioParams& p)
{
    p.validate();
    detail::require_uplink(ch, p, "exhaustive_schedule_mu_ul_variable");
    detail::require_positive_uplink(ch, "exhaustive_schedule_mu_ul_variable");
    if (p.K > kMaxExhaustiveMobiles)
        throw InvalidScenario("exhaustive_schedule_mu_ul_variable: too many mobiles for subset enumeration");

    detail::ScheduledWaterfill best;
    best.powers.assign(p.K, 0.0);
    best.rate = -1.0;
    std::size_t best_size = 0;
    std::vector<std::size_t> members;
    for (std::uint32_t mask = 1; mask < (1u << p.K); ++mask) {
        members.clear();
        double circuit = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            if (mask & (1u << n)) {
                members.push_back(n);
                circuit += p.p_c / ch.g_prime[n];
            }
        if (circuit > p.p_t)
            continue;
        auto candidate = detail::waterfill_scheduled(ch, p, members);
        if (candidate.rate > best.rate) {
            best = std::move(candidate);
            best_size = members.size();
        }
    }

    Allocation alloc;
    alloc.downlink_powers = best_size > 0 ? best.powers : std::vector<double>(p.K, 0.0);
    alloc.uplink_powers = detail::surplus_uplink(alloc.downlink_powers, ch, p.p_c);
    alloc.feasible = best_size > 0;
    alloc.diagnostics.stream_count = best_size;
    return alloc;
}

/// Closed-loop cost of one fixed-rate uplink stream: the downlink power that
/// covers the circuit and leaves exactly theta / g for transmission.
inline std::vector<double> closed_loop_costs(const ChannelRealization& ch, double p_c, double theta)
{
    std::vector<double> v(ch.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        const double gp = ch.g_prime[n];
        const double g = ch.g_up[n];
        if (!(gp > 0.0) || (!(g > 0.0) && theta > 0.0))
            v[n] = std::numeric_limits<double>::infinity();
        else
            v[n] = ((theta > 0.0 ? theta / g : 0.0) + p_c) / gp;
    }
    return v;
}

/// Fixed-rate multi-user uplink: greedy inversion on the closed-loop costs.
inline Allocation solve_mu_ul_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    p.validate();
    detail::require_uplink(ch, p, "solve_mu_ul_fixed");
    if (p.rate_mode != RateMode::fixed)
        throw InvalidScenario("solve_mu_ul_fixed: scenario is not fixed-rate");

    const auto v = closed_loop_costs(ch, p.p_c, p.theta);
    const auto order = detail::ascending_order(v);
    const auto inv = greedy_inversion(detail::permuted(v, order), p.p_t);

    Allocation alloc;
    alloc.downlink_powers = detail::unpermuted(inv.powers, order);
    alloc.uplink_powers.assign(p.K, 0.0);
    for (std::size_t i = 0; i < inv.count; ++i) {
        const std::size_t n = order[i];
        alloc.uplink_powers[n] = p.theta / ch.g_up[n];
    }
    alloc.feasible = inv.count > 0;
    alloc.diagnostics.stream_count = inv.count;
    alloc.diagnostics.permutation = order;
    return alloc;
}

inline Allocation solve_mu_ul(const ChannelRealization& ch, const ScenarioParams& p)
{
    return p.rate_mode == RateMode::variable ? solve_mu_ul_variable(ch, p) : solve_mu_ul_fixed(ch, p);
}

} // namespace swipt

#endif // SWIPT_POLICY_MU_UL_HPP
