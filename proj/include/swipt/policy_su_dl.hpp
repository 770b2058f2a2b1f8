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

#ifndef SWIPT_POLICY_SU_DL_HPP
#define SWIPT_POLICY_SU_DL_HPP

#include "swipt/allocation_core.hpp"

namespace swipt {

/// Per-beta rate gain the variable-rate downlink search water-fills over:
/// beta h (lower bound), beta h / sigma_b^2 (upper bound), or the exact
/// effective gain beta h / (beta sigma_a^2 + sigma_b^2).
enum class RateBound { exact, lower, upper };

inline double rate_scale(RateBound bound, const ScenarioParams& p, double beta)
{
    switch (bound) {
    case RateBound::lower: return 1.0;
    case RateBound::upper: return p.sigma_b2;
    case RateBound::exact: return beta * p.sigma_a2 + p.sigma_b2;
    }
    return 1.0;
}

struct BetaSearchOptions {
    std::size_t grid_points = 200;
    double tolerance = 1e-10; // final bracket width of the golden-section refinement
};

/// Splitting ratio that makes k fixed-rate streams decode at exactly theta
/// while the harvester receives exactly p_c. beta is the positive root of
/// beta^2 - c beta - d = 0; 1 - beta is carried separately because it is tiny
/// when p_c is small.
struct SplittingRatio {
    double beta = 1.0;
    double one_minus_beta = 0.0;
};

inline SplittingRatio splitting_ratio(const ScenarioParams& p, std::size_t k)
{
    if (!(p.sigma_a2 > 0.0))
        throw InvalidScenario("splitting ratio: sigma_a2 must be positive");
    if (k == 0)
        throw InvalidScenario("splitting ratio: stream count must be positive");
    const double d = p.sigma_b2 / p.sigma_a2;
    const double e = p.p_c / (static_cast<double>(k) * p.theta * p.sigma_a2);
    const double c = 1.0 - d - e;
    const double root = std::sqrt(c * c + 4.0 * d);

    SplittingRatio r;
    if (c >= 0.0)
        r.beta = 0.5 * (c + root);
    else
        r.beta = root - c > 0.0 ? 2.0 * d / (root - c) : 0.0;
    // Same root rewritten in y = 1 - beta: y^2 - (1 + d + e) y + e = 0.
    const double s = 1.0 + d + e;
    const double disc = std::sqrt((1.0 + d - e) * (1.0 + d - e) + 4.0 * d * e);
    r.one_minus_beta = e == 0.0 ? 0.0 : 2.0 * e / (s + disc);
    return r;
}

/// Exact downlink throughput of a single-user allocation, gated by the
/// circuit-power indicator.
inline ThroughputReport throughput_su_dl(const Allocation& alloc, const ChannelRealization& ch,
                                         const ScenarioParams& p)
{
    detail::require_downlink(ch, p, "throughput_su_dl");
    if (alloc.downlink_powers.size() != p.K || alloc.beta.size() != 1)
        throw InvalidScenario("throughput_su_dl: allocation dimensions do not match the channel");

    const double beta = alloc.beta.front();
    double received = 0.0;
    for (std::size_t n = 0; n < p.K; ++n)
        received += alloc.downlink_powers[n] * ch.h[n];
    const bool powered = at_least((1.0 - beta) * received, p.p_c);

    std::vector<double> rates(p.K, 0.0);
    if (powered && beta > 0.0) {
        const double denom = beta * p.sigma_a2 + p.sigma_b2;
        for (std::size_t n = 0; n < p.K; ++n) {
            const double snr = beta * alloc.downlink_powers[n] * ch.h[n] / denom;
            if (p.rate_mode == RateMode::variable)
                rates[n] = std::log2(1.0 + snr);
            else if (alloc.downlink_powers[n] > 0.0 && at_least(snr, p.theta))
                rates[n] = std::log2(1.0 + p.theta);
        }
    }
    return detail::make_report(std::move(rates), p.K);
}

namespace detail {

struct SuDlCandidate {
    double beta = 0.0;
    double objective = -1.0;
    WaterfillResult solution;
};

inline SuDlCandidate su_dl_at_beta(std::span<const double> h, const ScenarioParams& p, double beta, RateBound bound)
{
    SuDlCandidate c;
    c.beta = beta;
    const double scale = rate_scale(bound, p, beta);
    c.solution = dual_waterfill_circuit(h, p.p_t, p.p_c, beta, scale);
    if (!c.solution.feasible)
        return c;
    c.objective = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n)
        c.objective += std::log1p(beta * h[n] * c.solution.powers[n] / scale);
    return c;
}

} // namespace detail

/// Variable-rate single-user downlink: maximize the chosen rate surrogate over
/// (beta, P). beta is scanned on a grid across its feasible interval and the
/// best cell refined by golden section; each beta is solved by the
/// circuit-constrained water-filling.
inline Allocation solve_su_dl_variable(const ChannelRealization& ch, const ScenarioParams& p,
                                       RateBound bound = RateBound::exact, BetaSearchOptions opts = {})
{
    p.validate();
    detail::require_downlink(ch, p, "solve_su_dl_variable");
    if (bound != RateBound::exact && bound != RateBound::lower && bound != RateBound::upper)
        throw InvalidScenario("solve_su_dl_variable: invalid bound choice");
    if (bound == RateBound::upper && !(p.sigma_b2 > 0.0))
        throw InvalidScenario("solve_su_dl_variable: upper bound needs sigma_b2 > 0");
    for (double g : ch.h)
        if (!(g > 0.0))
            throw InvalidScenario("solve_su_dl_variable: gains must be strictly positive");
    if (opts.grid_points < 2)
        opts.grid_points = 2;

    Allocation alloc;
    alloc.downlink_powers.assign(p.K, 0.0);
    alloc.beta = {0.0};

    const double h_max = *std::max_element(ch.h.begin(), ch.h.end());
    if (!at_least(p.p_t * h_max, p.p_c))
        return alloc;

    const double beta_max = std::clamp(p.p_c > 0.0 ? 1.0 - p.p_c / (p.p_t * h_max) : 1.0, 0.0, 1.0);
    if (beta_max <= 0.0) {
        // Everything must reach the harvester; no information can be decoded.
        auto c = detail::su_dl_at_beta(ch.h, p, 0.0, bound);
        alloc.downlink_powers = c.solution.powers;
        alloc.feasible = true;
        return alloc;
    }

    auto eval = [&](double beta) { return detail::su_dl_at_beta(ch.h, p, beta, bound); };

    detail::SuDlCandidate best;
    std::size_t best_i = 0;
    const std::size_t N = opts.grid_points;
    for (std::size_t i = 1; i <= N; ++i) {
        auto c = eval(beta_max * static_cast<double>(i) / static_cast<double>(N));
        if (c.objective > best.objective) {
            best = std::move(c);
            best_i = i;
        }
    }

    double lo = beta_max * static_cast<double>(best_i - 1) / static_cast<double>(N);
    double hi = std::min(beta_max, beta_max * static_cast<double>(best_i + 1) / static_cast<double>(N));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    auto c1 = eval(x1);
    auto c2 = eval(x2);
    while (hi - lo > opts.tolerance) {
        if (c1.objective < c2.objective) {
            lo = x1;
            x1 = x2;
            c1 = std::move(c2);
            x2 = lo + inv_phi * (hi - lo);
            c2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            c2 = std::move(c1);
            x1 = hi - inv_phi * (hi - lo);
            c1 = eval(x1);
        }
    }
    // The harvest floor often binds at the largest feasible ratio.
    auto edge = eval(beta_max);
    for (auto* c : {&c1, &c2, &edge})
        if (c->objective > best.objective)
            best = std::move(*c);

    alloc.downlink_powers = best.solution.powers;
    alloc.beta = {best.beta};
    alloc.feasible = true;
    if (best.solution.multipliers) {
        alloc.diagnostics.lambda_star = best.solution.multipliers->first;
        alloc.diagnostics.mu_star = best.solution.multipliers->second;
        alloc.diagnostics.water_level = best.solution.water_level;
    }
    alloc.diagnostics.stream_count = best.solution.active_set.size();
    return alloc;
}

/// Fixed-rate single-user downlink: for every stream count k, invert the k
/// strongest sub-channels at the splitting ratio that meets SNR = theta and
/// harvest = p_c with equality; serve the largest affordable k.
inline Allocation solve_su_dl_fixed(const ChannelRealization& ch, const ScenarioParams& p)
{
    p.validate();
    detail::require_downlink(ch, p, "solve_su_dl_fixed");
    if (p.rate_mode != RateMode::fixed)
        throw InvalidScenario("solve_su_dl_fixed: scenario is not fixed-rate");
    if (!(p.sigma_a2 > 0.0))
        throw InvalidScenario("solve_su_dl_fixed: sigma_a2 must be positive");

    const auto order = detail::descending_order(ch.h);
    const auto h_sorted = detail::permuted(ch.h, order);

    std::size_t k_star = 0;
    SplittingRatio ratio_star = splitting_ratio(p, 1);
    std::vector<double> powers_star(p.K, 0.0);
    for (std::size_t k = 1; k <= p.K; ++k) {
        const auto ratio = splitting_ratio(p, k);
        if (!(ratio.beta > 0.0) || !(h_sorted[k - 1] > 0.0))
            continue;
        const double per_gain = p.theta * (ratio.beta * p.sigma_a2 + p.sigma_b2) / ratio.beta;
        std::vector<double> powers(p.K, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            powers[i] = per_gain / h_sorted[i];
            total += powers[i];
        }
        // Stream-count cost is not monotone in k, so every k is tried.
        if (total <= p.p_t) {
            k_star = k;
            ratio_star = ratio;
            powers_star = std::move(powers);
        }
    }

    Allocation alloc;
    alloc.downlink_powers = detail::unpermuted(powers_star, order);
    alloc.beta = {ratio_star.beta};
    alloc.feasible = k_star > 0;
    alloc.diagnostics.stream_count = k_star;
    alloc.diagnostics.permutation = order;
    return alloc;
}

inline Allocation solve_su_dl(const ChannelRealization& ch, const ScenarioParams& p)
{
    return p.rate_mode == RateMode::variable ? solve_su_dl_variable(ch, p) : solve_su_dl_fixed(ch, p);
}

} // namespace swipt

#endif // SWIPT_POLICY_SU_DL_HPP
