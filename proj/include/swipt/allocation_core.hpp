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

#ifndef SWIPT_ALLOCATION_CORE_HPP
#define SWIPT_ALLOCATION_CORE_HPP

#include <limits>
#include <utility>

#include "swipt/types.hpp"

namespace swipt {

struct WaterfillResult {
    std::vector<double> powers;
    double water_level = 0.0;
    std::vector<std::size_t> active_set;
    std::optional<std::pair<double, double>> multipliers; // (lambda*, mu*)
    bool feasible = true;
};

struct GreedyInversionResult {
    std::size_t count = 0;
    std::vector<double> powers; // aligned with the sorted cost order
};

/// Classic water-filling: maximize sum log(1 + Q_n g_n) s.t. sum Q_n <= budget.
/// Q_n = eta - 1/g_n on the active set. A zero budget yields the all-zero
/// allocation with eta reported as min 1/g_n.
inline WaterfillResult waterfill(std::span<const double> gains, double budget)
{
    if (gains.empty())
        throw InvalidScenario("waterfill: empty gain sequence");
    for (double g : gains)
        if (!(g > 0.0) || !std::isfinite(g))
            throw InvalidScenario("waterfill: gains must be strictly positive and finite");
    if (!(budget >= 0.0) || !std::isfinite(budget))
        throw InvalidScenario("waterfill: budget must be nonnegative");

    const std::size_t K = gains.size();
    WaterfillResult out;
    out.powers.assign(K, 0.0);
    const auto order = detail::descending_order(gains);
    if (budget == 0.0) {
        out.water_level = 1.0 / gains[order.front()];
        return out;
    }

    // Largest L whose weakest member still sits below the water level.
    double inv_sum = 0.0;
    std::size_t active = 0;
    double eta = 0.0;
    for (std::size_t L = 1; L <= K; ++L) {
        inv_sum += 1.0 / gains[order[L - 1]];
        const double level = (budget + inv_sum) / static_cast<double>(L);
        if (level - 1.0 / gains[order[L - 1]] <= 0.0)
            break;
        active = L;
        eta = level;
    }
    out.water_level = eta;
    for (std::size_t i = 0; i < active; ++i) {
        const std::size_t n = order[i];
        out.powers[n] = eta - 1.0 / gains[n];
        out.active_set.push_back(n);
    }
    std::sort(out.active_set.begin(), out.active_set.end());
    out.multipliers = std::make_pair(1.0 / eta, 0.0);
    return out;
}

/// Water-filling with a linear harvesting floor:
///
///   maximize  sum log(1 + a_n P_n)
///   s.t.      sum P_n <= budget,  sum b_n P_n >= target,  P_n >= 0
///
/// Stationarity gives P_n = 1/(lambda - mu b_n) - 1/a_n, clipped at zero.
/// mu = 0 is tried first; if the floor is violated, mu is bisected so that the
/// floor binds, with an inner bisection on lambda exhausting the budget.
inline WaterfillResult dual_waterfill(std::span<const double> rate_gains, std::span<const double> harvest_gains,
                                      double budget, double target)
{
    const std::size_t K = rate_gains.size();
    if (K == 0 || harvest_gains.size() != K)
        throw InvalidScenario("dual_waterfill: gain sequences must be nonempty and of equal length");
    if (!(budget >= 0.0) || !(target >= 0.0))
        throw InvalidScenario("dual_waterfill: budget and target must be nonnegative");
    for (std::size_t n = 0; n < K; ++n)
        if (!(rate_gains[n] >= 0.0) || !(harvest_gains[n] >= 0.0) || !std::isfinite(rate_gains[n]) ||
            !std::isfinite(harvest_gains[n]))
            throw InvalidScenario("dual_waterfill: gains must be finite and nonnegative");

    WaterfillResult out;
    out.powers.assign(K, 0.0);

    const std::size_t strongest = detail::argmax_lowest(harvest_gains);
    const double b_max = harvest_gains[strongest];
    if (!at_least(budget * b_max, target)) {
        out.feasible = false;
        return out;
    }

    auto finish = [&](WaterfillResult& r) {
        r.active_set.clear();
        for (std::size_t n = 0; n < K; ++n)
            if (r.powers[n] > 0.0)
                r.active_set.push_back(n);
        return r;
    };

    // No rate to gain anywhere: park the budget where it harvests most.
    const bool rate_free = std::all_of(rate_gains.begin(), rate_gains.end(), [](double a) { return a == 0.0; });
    if (rate_free || budget == 0.0) {
        out.powers[strongest] = budget;
        return finish(out);
    }
    if (std::any_of(rate_gains.begin(), rate_gains.end(), [](double a) { return a == 0.0; }))
        throw InvalidScenario("dual_waterfill: rate gains must be all positive or all zero");

    auto harvest_of = [&](std::span<const double> P) {
        double s = 0.0;
        for (std::size_t n = 0; n < K; ++n)
            s += harvest_gains[n] * P[n];
        return s;
    };

    auto plain = waterfill(rate_gains, budget);
    if (at_least(harvest_of(plain.powers), target)) {
        plain.multipliers = std::make_pair(1.0 / plain.water_level, 0.0);
        return plain;
    }

    // lambda = mu * b_max + s with s > 0 keeps every denominator positive and
    // well conditioned when mu is large.
    std::vector<double> P(K);
    auto fill = [&](double s, double mu) {
        double total = 0.0;
        for (std::size_t n = 0; n < K; ++n) {
            const double denom = s + mu * (b_max - harvest_gains[n]);
            const double v = 1.0 / denom - 1.0 / rate_gains[n];
            P[n] = v > 0.0 ? v : 0.0;
            total += P[n];
        }
        return total;
    };

    auto solve_lambda = [&](double mu) {
        double hi = 0.0;
        for (std::size_t n = 0; n < K; ++n)
            hi = std::max(hi, rate_gains[n] - mu * (b_max - harvest_gains[n]));
        double lo = 0.5 * hi;
        for (int i = 0; i < 4000 && fill(lo, mu) <= budget; ++i) {
            hi = lo;
            lo *= 0.5;
        }
        for (int i = 0; i < 300 && hi - lo > 1e-15 * hi; ++i) {
            const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
            if (fill(mid, mu) > budget)
                lo = mid;
            else
                hi = mid;
        }
        fill(hi, mu);
        return hi;
    };

    auto harvest_at = [&](double mu) {
        solve_lambda(mu);
        return harvest_of(P);
    };

    double mu_lo = 0.0;
    double mu_hi = plain.multipliers->first / std::max(b_max, std::numeric_limits<double>::min());
    bool bracketed = false;
    for (int i = 0; i < 200; ++i) {
        if (harvest_at(mu_hi) >= target) {
            bracketed = true;
            break;
        }
        mu_lo = mu_hi;
        mu_hi *= 2.0;
    }
    if (!bracketed) {
        // Floor only reachable at the max-harvest vertex.
        out.powers[strongest] = budget;
        return finish(out);
    }
    for (int i = 0; i < 300 && mu_hi - mu_lo > 1e-12 * mu_hi; ++i) {
        const double mid = 0.5 * (mu_lo + mu_hi);
        if (harvest_at(mid) >= target)
            mu_hi = mid;
        else
            mu_lo = mid;
    }
    const double s = solve_lambda(mu_hi);
    out.powers = P;
    out.multipliers = std::make_pair(mu_hi * b_max + s, mu_hi);
    out.water_level = 1.0 / out.multipliers->first;
    return finish(out);
}

/// Fixed-beta circuit-constrained allocation: rate gains beta*h/rate_scale
/// (rate_scale = 1 for the lower bound, sigma_b^2 for the upper bound),
/// harvest gains (1 - beta) h, harvest floor p_c.
inline WaterfillResult dual_waterfill_circuit(std::span<const double> h, double p_t, double p_c, double beta,
                                              double rate_scale = 1.0)
{
    if (!(beta >= 0.0 && beta <= 1.0))
        throw InvalidScenario("dual_waterfill_circuit: beta must lie in [0, 1]");
    if (!(rate_scale > 0.0))
        throw InvalidScenario("dual_waterfill_circuit: rate scale must be positive");
    for (double g : h)
        if (!(g > 0.0))
            throw InvalidScenario("dual_waterfill_circuit: gains must be strictly positive");
    std::vector<double> a(h.size()), b(h.size());
    for (std::size_t n = 0; n < h.size(); ++n) {
        a[n] = beta * h[n] / rate_scale;
        b[n] = (1.0 - beta) * h[n];
    }
    return dual_waterfill(a, b, p_t, p_c);
}

/// Serve the longest affordable prefix of ascending per-stream costs.
inline GreedyInversionResult greedy_inversion(std::span<const double> sorted_costs, double budget)
{
    for (std::size_t i = 0; i < sorted_costs.size(); ++i) {
        if (!(sorted_costs[i] >= 0.0))
            throw InvalidScenario("greedy_inversion: costs must be nonnegative");
        if (i > 0 && sorted_costs[i] < sorted_costs[i - 1])
            throw InvalidScenario("greedy_inversion: costs must be sorted ascending");
    }
    GreedyInversionResult out;
    out.powers.assign(sorted_costs.size(), 0.0);
    double spent = 0.0;
    for (std::size_t i = 0; i < sorted_costs.size(); ++i) {
        if (spent + sorted_costs[i] > budget)
            break;
        spent += sorted_costs[i];
        out.powers[i] = sorted_costs[i];
        out.count = i + 1;
    }
    return out;
}

} // namespace swipt

#endif // SWIPT_ALLOCATION_CORE_HPP
