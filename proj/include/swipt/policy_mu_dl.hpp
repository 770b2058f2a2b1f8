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

#ifndef SWIPT_POLICY_MU_DL_HPP
#define SWIPT_POLICY_MU_DL_HPP

#include "swipt/policy_su_dl.hpp"

namespace swipt {

/// Multi-user downlink sum throughput with one circuit gate per mobile.
inline ThroughputReport throughput_mu_dl(const Allocation& alloc, const ChannelRealization& ch,
                                         const ScenarioParams& p)
{
    detail::require_downlink(ch, p, "throughput_mu_dl");
    if (alloc.downlink_powers.size() != p.K || alloc.beta.size() != p.K)
        throw InvalidScenario("throughput_mu_dl: allocation dimensions do not match the channel");

    std::vector<double> rates(p.K, 0.0);
    for (std::size_t n = 0; n < p.K; ++n) {
        const double beta = alloc.beta[n];
        const double received = alloc.downlink_powers[n] * ch.h[n];
        if (!at_least((1.0 - beta) * received, p.p_c) || beta <= 0.0)
            continue;
        const double snr = beta * received / (beta * p.sigma_a2 + p.sigma_b2);
        if (p.rate_mode == RateMode::variable)
            rates[n] = std::log2(1.0 + snr);
        else if (alloc.downlink_powers[n] > 0.0 && at_least(snr, p.theta))
            rates[n] = std::log2(1.0 + p.theta);
    }
    return detail::make_report(std::move(rates), p.K);
}

namespace detail {

/// Lower-bound closed form: each active mobile diverts exactly p_c to its
/// harvester and the surplus is water-filled over the L strongest mobiles
/// after paying their circuit offsets p_c / h. L is chosen by enumerating
/// every admissible prefix.
inline Allocation mu_dl_lower_bound(const ChannelRealization& ch, const ScenarioParams& p)
{
    const auto order = detail::descending_order(ch.h);
    const auto h_sorted = detail::permuted(ch.h, order);

    // Prefix L is admissible while the circuit offsets fit the budget and the
    // weakest member still gets positive surplus power.
    std::vector<double> level(p.K + 1, 0.0);
    std::size_t l_max = 0;
    double inv_sum = 0.0;
    for (std::size_t L = 1; L <= p.K; ++L) {
        inv_sum += 1.0 / h_sorted[L - 1];
        const double eta = (p.p_t + (1.0 - p.p_c) * inv_sum) / static_cast<double>(L);
        if (p.p_t - p.p_c * inv_sum < 0.0 || !(eta - 1.0 / h_sorted[L - 1] > 0.0))
            break;
        level[L] = eta;
        l_max = L;
    }

    std::size_t l_star = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t L = 1; L <= l_max; ++L) {
        double rate = 0.0;
        for (std::size_t n = 0; n < L; ++n)
            rate += std::log2(level[L] * h_sorted[n]);
        if (rate > best) {
            best = rate;
            l_star = L;
        }
    }

    std::vector<double> powers(p.K, 0.0);
    for (std::size_t n = 0; n < l_star; ++n)
        powers[n] = level[l_star] - 1.0 / h_sorted[n] + p.p_c / h_sorted[n];

    Allocation alloc;
    alloc.downlink_powers = detail::unpermuted(powers, order);
    alloc.beta.assign(p.K, 0.0);
    for (std::size_t n = 0; n < p.K; ++n)
        if (alloc.downlink_powers[n] > 0.0)
            alloc.beta[n] = std::clamp(1.0 - p.p_c / (alloc.downlink_powers[n] * ch.h[n]), 0.0, 1.0);
    alloc.feasible = l_star > 0;
    if (l_star > 0)
        alloc.diagnostics.water_level = level[l_star];
    alloc.diagnostics.stream_count = l_star;
    alloc.diagnostics.permutation = order;
    return alloc;
}

/// SNR of a mobile that receives x = P h and diverts exactly c to its
/// harvester: beta = 1 - c / x, SNR = x (x - c) / (x - sigma_a^2 c).
inline double diverted_snr(double x, double c, double sigma_a2)
{
    return x > c ? x * (x - c) / (x - sigma_a2 * c) : 0.0;
}

/// d/dx log(1 + diverted_snr(x)); strictly decreasing on x >= c.
inline double diverted_marginal(double x, double c, double sigma_a2)
{
    const double u = x - sigma_a2 * c;
    const double m = sigma_a2 * (1.0 - sigma_a2) * c * c;
    const double slope = 1.0 + (u > 0.0 ? m / (u * u) : 0.0);
    return slope / (1.0 + diverted_snr(x, c, sigma_a2));
}

/// Received power x >= c at which h * marginal(x) = lambda (x = c if the
/// marginal is already below lambda there).
inline double diverted_level(double h, double lambda, double c, double sigma_a2)
{
    if (h * diverted_marginal(c, c, sigma_a2) <= lambda)
        return c;
    double lo = c;
    double hi = c + h / lambda + 1.0;
    while (h * diverted_marginal(hi, c, sigma_a2) > lambda)
        hi = 2.0 * hi;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (h * diverted_marginal(mid, c, sigma_a2) > lambda)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

struct DivertedFill {
    double rate = 0.0;
    double lambda = 0.0;
    std::vector<double> powers; // aligned with the sorted prefix
};

/// Concave per-prefix program: maximize sum log2(1 + diverted_snr(P_n h_n))
/// s.t. sum P_n <= p_t, P_n h_n >= p_c. Marginals are equalized by bisection
/// on the common multiplier.
inline DivertedFill diverted_waterfill(std::span<const double> h, const ScenarioParams& p)
{
    const std::size_t L = h.size();
    DivertedFill out;
    out.powers.assign(L, 0.0);
    auto fill = [&](double lambda) {
        double total = 0.0;
        for (std::size_t n = 0; n < L; ++n) {
            out.powers[n] = diverted_level(h[n], lambda, p.p_c, p.sigma_a2) / h[n];
            total += out.powers[n];
        }
        return total;
    };

    double hi = 0.0;
    for (double g : h)
        hi = std::max(hi, g * diverted_marginal(p.p_c, p.p_c, p.sigma_a2));
    double lo = 0.5 * hi;
    while (fill(lo) <= p.p_t && lo > 1e-300) {
        hi = lo;
        lo *= 0.5;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
        const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (fill(mid) > p.p_t)
            lo = mid;
        else
            hi = mid;
    }
    fill(hi);
    out.lambda = hi;
    for (std::size_t n = 0; n < L; ++n)
        out.rate += std::log2(1.0 + diverted_snr(out.powers[n] * h[n], p.p_c, p.sigma_a2));
    return out;
}

/// Exact-SNR variant of the prefix search: same structure as the closed form
/// but each prefix is solved with the true decoder SNR.
inline Allocation mu_dl_exact(const ChannelRealization& ch, const ScenarioParams& p)
{
    const auto order = descending_order(ch.h);
    const auto h_sorted = permuted(ch.h, order);

    std::size_t l_star = 0;
    DivertedFill best;
    best.rate = -1.0;
    double circuit = 0.0;
    for (std::size_t L = 1; L <= p.K; ++L) {
        circuit += p.p_c / h_sorted[L - 1];
        if (circuit > p.p_t)
            break;
        auto candidate = diverted_waterfill(std::span(h_sorted).first(L), p);
        if (candidate.rate > best.rate) {
            best = std::move(candidate);
            l_star = L;
        }
    }

    std::vector<double> powers(p.K, 0.0);
    for (std::size_t n = 0; n < l_star; ++n)
        powers[n] = best.powers[n];

    Allocation alloc;
    alloc.downlink_powers = unpermuted(powers, order);
    alloc.beta.assign(p.K, 0.0);
    for (std::size_t n = 0; n < p.K; ++n)
        if (alloc.downlink_powers[n] > 0.0)
            alloc.beta[n] = std::clamp(1.0 - p.p_c / (alloc.downlink_powers[n] * ch.h[n]), 0.0, 1.0);
    alloc.feasible = l_star > 0;
    if (l_star > 0)
        alloc.diagnostics.lambda_star = best.lambda;
    alloc.diagnostics.stream_count = l_star;
    alloc.diagnostics.permutation = order;
    return alloc;
}

} // namespace detail

/// Variable-rate multi-user downlink. Every active mobile diverts exactly p_c
/// and the active set is a prefix of the strongest mobiles. `exact` solves
/// each prefix with the true decoder SNR; `lower` uses the closed-form
/// water-filling of the lower-bound objective.
inline Allocation solve_mu_dl_variable(const ChannelRealization& ch, const ScenarioParams& p,
                                       RateBound bound = RateBound::exact)
{
    p.validate();
    detail::require_downlink(ch, p, "solve_mu_dl_variable");
    for (double g : ch.h)
        if (!(g > 0.0))
            throw InvalidScenario("solve_mu_dl_variable: gains must be strictly positive");
    if (bound == RateBound::lower)
        return detail::mu_dl_lower_bound(ch, p);
    if (bound == RateBound::exact)
        return detail::mu_dl_exact(ch, p);
    throw InvalidScenario("solve_mu_dl_variable: only the exact and lower-bound objectives are supported");
}

/// Fixed-rate multi-user downlink. All mobiles share the splitting ratio that
/// meets SNR = theta and harvest = p_c with equality; mobiles are then served
/// strongest-first at their inversion power until the budget runs out.
inline Allocation solve_mu_dl_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    p.validate();
    detail::require_downlink(ch, p, "solve_mu_dl_fixed");
    if (p.rate_mode != RateMode::fixed)
        throw InvalidScenario("solve_mu_dl_fixed: scenario is not fixed-rate");
    if (!(p.sigma_a2 > 0.0))
        throw InvalidScenario("solve_mu_dl_fixed: sigma_a2 must be positive");

    const auto ratio = splitting_ratio(p, 1);
    const auto order = detail::descending_order(ch.h);
    std::vector<double> costs(p.K);
    for (std::size_t i = 0; i < p.K; ++i) {
        const double h = ch.h[order[i]];
        if (!(h > 0.0))
            costs[i] = std::numeric_limits<double>::infinity();
        else if (p.p_c == 0.0)
            costs[i] = p.theta / h; // beta = 1: SNR = P h
        else
            costs[i] = p.p_c / (ratio.one_minus_beta * h);
    }
    const auto inv = greedy_inversion(costs, p.p_t);

    Allocation alloc;
    alloc.downlink_powers = detail::unpermuted(inv.powers, order);
    alloc.beta.assign(p.K, ratio.beta);
    alloc.feasible = inv.count > 0;
    alloc.diagnostics.stream_count = inv.count;
    alloc.diagnostics.permutation = order;
    return alloc;
}

inline Allocation solve_mu_dl(const ChannelRealization& ch, const ScenarioParams& p)
{
    return p.rate_mode == RateMode::variable ? solve_mu_dl_variable(ch, p) : solve_mu_dl_fixed(ch, p);
}

} // namespace swipt

#endif // SWIPT_POLICY_MU_DL_HPP
