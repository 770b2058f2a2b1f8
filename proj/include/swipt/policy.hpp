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

#ifndef SWIPT_POLICY_HPP
#define SWIPT_POLICY_HPP

#include "swipt/policy_mu_dl.hpp"
#include "swipt/policy_mu_ul.hpp"
#include "swipt/policy_su_dl.hpp"
#include "swipt/policy_su_ul.hpp"

namespace swipt {

/// Optimal (or closed-form approximate) policy for the scenario's
/// (user mode, IT direction, rate mode) triple.
inline Allocation solve_policy(const ChannelRealization& ch, const ScenarioParams& p)
{
    if (p.user_mode == UserMode::single)
        return p.it_direction == LinkDirection::downlink ? solve_su_dl(ch, p) : solve_su_ul(ch, p);
    return p.it_direction == LinkDirection::downlink ? solve_mu_dl(ch, p) : solve_mu_ul(ch, p);
}

/// Exact throughput of any allocation under the scenario's evaluator.
inline ThroughputReport evaluate_throughput(const Allocation& alloc, const ChannelRealization& ch,
                                            const ScenarioParams& p)
{
    if (p.user_mode == UserMode::single)
        return p.it_direction == LinkDirection::downlink ? throughput_su_dl(alloc, ch, p)
                                                         : throughput_su_ul(alloc, ch, p);
    return p.it_direction == LinkDirection::downlink ? throughput_mu_dl(alloc, ch, p)
                                                     : throughput_mu_ul(alloc, ch, p);
}

/// Constraint violations beyond the shared tolerance; empty when the
/// allocation is admissible.
inline std::vector<std::string> constraint_violations(const Allocation& alloc, const ChannelRealization& ch,
                                                      const ScenarioParams& p)
{
    std::vector<std::string> out;
    if (alloc.downlink_powers.size() != p.K) {
        out.emplace_back("downlink power vector has wrong length");
        return out;
    }
    for (double P : alloc.downlink_powers)
        if (!(P >= 0.0)) {
            out.emplace_back("negative downlink power");
            break;
        }
    if (!at_least(p.p_t, detail::sum(alloc.downlink_powers)))
        out.emplace_back("sum downlink power exceeds p_t");

    if (p.it_direction == LinkDirection::downlink) {
        const std::size_t expected = p.user_mode == UserMode::single ? 1 : p.K;
        if (alloc.beta.size() != expected)
            out.emplace_back("splitting ratio vector has wrong length");
        for (double b : alloc.beta)
            if (!(b >= 0.0 && b <= 1.0)) {
                out.emplace_back("splitting ratio outside [0, 1]");
                break;
            }
        return out;
    }

    if (alloc.uplink_powers.size() != p.K) {
        out.emplace_back("uplink power vector has wrong length");
        return out;
    }
    for (double Q : alloc.uplink_powers)
        if (!(Q >= 0.0)) {
            out.emplace_back("negative uplink power");
            break;
        }
    if (p.user_mode == UserMode::single) {
        double harvested = 0.0;
        for (std::size_t n = 0; n < p.K; ++n)
            harvested += alloc.downlink_powers[n] * ch.g_prime[n];
        const double spent = detail::sum(alloc.uplink_powers);
        if (spent > 0.0 && !at_least(harvested - p.p_c, spent))
            out.emplace_back("uplink power exceeds harvested surplus");
    } else {
        for (std::size_t n = 0; n < p.K; ++n) {
            const double Q = alloc.uplink_powers[n];
            if (Q > 0.0 && !at_least(alloc.downlink_powers[n] * ch.g_prime[n] - p.p_c, Q)) {
                out.emplace_back("uplink power of a mobile exceeds its harvested surplus");
                break;
            }
        }
    }
    return out;
}

} // namespace swipt

#endif // SWIPT_POLICY_HPP
