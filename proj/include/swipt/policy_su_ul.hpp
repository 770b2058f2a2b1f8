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

#ifndef SWIPT_POLICY_SU_UL_HPP
#define SWIPT_POLICY_SU_UL_HPP

#include "swipt/allocation_core.hpp"

namespace swipt {

/// Single-user uplink throughput. Throws InvalidAllocation when the uplink
/// powers exceed what the harvester can fund.
inline ThroughputReport throughput_su_ul(const Allocation& alloc, const ChannelRealization& ch,
                                         const ScenarioParams& p)
{
    detail::require_uplink(ch, p, "throughput_su_ul");
    if (alloc.downlink_powers.size() != p.K || alloc.uplink_powers.size() != p.K)
        throw InvalidScenario("throughput_su_ul: allocation dimensions do not match the channel");

    double harvested = 0.0;
    for (std::size_t n = 0; n < p.K; ++n)
        harvested += alloc.downlink_powers[n] * ch.g_prime[n];
    std::vector<double> rates(p.K, 0.0);
    // An unpowered mobile transmits nothing, so the budget only binds when on.
    if (at_least(harvested, p.p_c)) {
        const double spent = detail::sum(alloc.uplink_powers);
        if (spent > 0.0 && !at_least(harvested - p.p_c, spent))
            throw InvalidAllocation("throughput_su_ul: uplink powers exceed the harvested budget");
        for (std::size_t n = 0; n < p.K; ++n) {
            const double snr = alloc.uplink_powers[n] * ch.g_up[n];
            if (p.rate_mode == RateMode::variable)
                rates[n] = std::log2(1.0 + snr);
            else if (alloc.uplink_powers[n] > 0.0 && at_least(snr, p.theta))
                rates[n] = std::log2(1.0 + p.theta);
        }
    }
    return detail::make_report(std::move(rates), p.K);
}

namespace detail {

/// All of p_t on the strongest power tone (lowest index on ties).
inline Allocation su_ul_downlink(const ChannelRealization& ch, const ScenarioParams& p, double& budget)
{
    Allocation alloc;
    alloc.downlink_powers.assign(p.K, 0.0);
    alloc.uplink_powers.assign(p.K, 0.0);
    const std::size_t best = argmax_lowest(ch.g_prime);
    alloc.downlink_powers[best] = p.p_t;
    const double harvested = p.p_t * ch.g_prime[best];
    alloc.feasible = at_least(harvested, p.p_c);
    budget = alloc.feasible ? std::max(0.0, harvested - p.p_c) : 0.0;
    return alloc;
}

} // namespace detail

/// Variable-rate single-user uplink: maximum-efficiency power tone, then
/// water-filling of the harvested surplus over the uplink sub-channels.
inline Allocation solve_su_ul_variable(const ChannelRealization& ch, const ScenarioParams& p)
{
    p.validate();
    detail::require_uplink(ch, p, "solve_su_ul_variable");
    double budget = 0.0;
    Allocation alloc = detail::su_ul_downlink(ch, p, budget);
    if (!alloc.feasible)
        return alloc;

    const auto wf = waterfill(ch.g_up, budget);
    alloc.uplink_powers = wf.powers;
    alloc.diagnostics.water_level = wf.water_level;
    alloc.diagnostics.stream_count = wf.active_set.size();
    return alloc;
}

/// Fixed-rate single-user uplink: same power tone, then greedy channel
/// inversion of the uplink streams in descending gain order.
inline Allocation solve_su_ul_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    p.validate();
    detail::require_uplink(ch, p, "solve_su_ul_fixed");
    if (p.rate_mode != RateMode::fixed)
        throw InvalidScenario("solve_su_ul_fixed: scenario is not fixed-rate");
    double budget = 0.0;
    Allocation alloc = detail::su_ul_downlink(ch, p, budget);

    const auto order = detail::descending_order(ch.g_up);
    alloc.diagnostics.permutation = order;
    alloc.diagnostics.stream_count = 0;
    if (!alloc.feasible)
        return alloc;

    std::vector<double> costs(p.K);
    for (std::size_t i = 0; i < p.K; ++i) {
        const double g = ch.g_up[order[i]];
        costs[i] = g > 0.0 ? p.theta / g : std::numeric_limits<double>::infinity();
    }
    const auto inv = greedy_inversion(costs, budget);
    alloc.uplink_powers = detail::unpermuted(inv.powers, order);
    alloc.diagnostics.stream_count = inv.count;
    return alloc;
}

inline Allocation solve_su_ul(const ChannelRealization& ch, const ScenarioParams& p)
{
    return p.rate_mode == RateMode::variable ? solve_su_ul_variable(ch, p) : solve_su_ul_fixed(ch, p);
}

} // namespace swipt

#endif // SWIPT_POLICY_SU_UL_HPP
