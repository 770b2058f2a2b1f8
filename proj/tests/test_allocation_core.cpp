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

#include <random>

#include "catch_amalgamated.hpp"
#include "swipt/allocation_core.hpp"

using namespace swipt;
using Catch::Matchers::WithinAbs;

namespace {

double log2_rate(std::span<const double> gains, std::span<const double> P)
{
    double r = 0.0;
    for (std::size_t n = 0; n < gains.size(); ++n)
        r += std::log2(1.0 + gains[n] * P[n]);
    return r;
}

} // namespace

TEST_CASE("waterfill splits symmetric gains evenly", "[allocation_core]")
{
    const std::vector<double> g{1.0, 1.0};
    const auto r = waterfill(g, 2.0);
    CHECK_THAT(r.powers[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.powers[1], WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.water_level, WithinAbs(2.0, 1e-12));
}

TEST_CASE("waterfill on gains 2 and 1 with unit budget", "[allocation_core]")
{
    const std::vector<double> g{2.0, 1.0};
    const auto r = waterfill(g, 1.0);
    CHECK_THAT(r.powers[0], WithinAbs(0.75, 1e-12));
    CHECK_THAT(r.powers[1], WithinAbs(0.25, 1e-12));
    CHECK_THAT(r.water_level, WithinAbs(1.25, 1e-12));
    CHECK_THAT(log2_rate(g, r.powers), WithinAbs(1.6438561897747248, 1e-12));
}

TEST_CASE("waterfill gives a single channel the whole budget", "[allocation_core]")
{
    const std::vector<double> g{0.37};
    CHECK_THAT(waterfill(g, 4.2).powers[0], WithinAbs(4.2, 1e-12));
}

TEST_CASE("waterfill leaves weak channels dry", "[allocation_core]")
{
    const std::vector<double> g{10.0, 0.01};
    const auto r = waterfill(g, 1.0);
    CHECK(r.powers[1] == 0.0);
    CHECK(r.active_set == std::vector<std::size_t>{0});
}

TEST_CASE("waterfill with zero budget reports the sentinel level", "[allocation_core]")
{
    const std::vector<double> g{2.0, 4.0};
    const auto r = waterfill(g, 0.0);
    CHECK(r.powers == std::vector<double>{0.0, 0.0});
    CHECK(r.active_set.empty());
    CHECK_THAT(r.water_level, WithinAbs(0.25, 1e-15));
}

TEST_CASE("waterfill rejects bad input", "[allocation_core]")
{
    CHECK_THROWS_AS(waterfill(std::vector<double>{}, 1.0), InvalidScenario);
    CHECK_THROWS_AS(waterfill(std::vector<double>{1.0, 0.0}, 1.0), InvalidScenario);
    CHECK_THROWS_AS(waterfill(std::vector<double>{1.0}, -1.0), InvalidScenario);
}

TEST_CASE("waterfill is monotone in budget and beats a grid", "[allocation_core]")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> g{u(rng), u(rng), u(rng)};
        const double budget = u(rng);
        const auto a = waterfill(g, budget);
        const auto b = waterfill(g, budget * 1.5);
        double total = 0.0;
        for (std::size_t n = 0; n < 3; ++n) {
            CHECK(b.powers[n] >= a.powers[n] - 1e-12);
            total += a.powers[n];
        }
        CHECK_THAT(total, WithinAbs(budget, 1e-9));

        const double best = log2_rate(g, a.powers);
        const int N = 200;
        double grid = 0.0;
        for (int i = 0; i <= N; ++i)
            for (int j = 0; i + j <= N; ++j) {
                const std::vector<double> P{budget * i / N, budget * j / N, budget * (N - i - j) / N};
                grid = std::max(grid, log2_rate(g, P));
            }
        CHECK(best >= grid - 1e-12);
        CHECK(best - grid < 1e-2);
    }
}

TEST_CASE("dual waterfill reduces to plain waterfill when the floor is slack", "[allocation_core]")
{
    const std::vector<double> h{1.0, 1.0};
    const auto r = dual_waterfill_circuit(h, 2.0, 0.5, 0.5);
    REQUIRE(r.feasible);
    CHECK_THAT(r.powers[0], WithinAbs(1.0, 1e-9));
    CHECK_THAT(r.powers[1], WithinAbs(1.0, 1e-9));
    REQUIRE(r.multipliers);
    CHECK(r.multipliers->second == 0.0);
}

TEST_CASE("dual waterfill with a binding harvest floor", "[allocation_core]")
{
    // Reference: constrained optimum on h = [4, 3], beta = 0.5, p_c = 1.9 is
    // P = [0.8, 0.2] with sum log2(1 + beta h P) = 1.7570232465.
    const std::vector<double> h{4.0, 3.0};
    const auto r = dual_waterfill_circuit(h, 1.0, 1.9, 0.5);
    REQUIRE(r.feasible);
    CHECK_THAT(r.powers[0], WithinAbs(0.8, 1e-7));
    CHECK_THAT(r.powers[1], WithinAbs(0.2, 1e-7));
    const double harvest = 0.5 * (4.0 * r.powers[0] + 3.0 * r.powers[1]);
    CHECK(harvest >= 1.9 - 1e-9);
    CHECK_THAT(r.powers[0] + r.powers[1], WithinAbs(1.0, 1e-9));
    const std::vector<double> a{2.0, 1.5};
    CHECK_THAT(log2_rate(a, r.powers), WithinAbs(1.7570232465074593, 1e-7));
    REQUIRE(r.multipliers);
    CHECK(r.multipliers->second > 0.0);
}

TEST_CASE("dual waterfill matches a grid search on h = [4, 1]", "[allocation_core]")
{
    const std::vector<double> h{4.0, 1.0};
    const double beta = 0.5;
    for (double p_c : {0.2, 1.0, 1.6, 1.9}) {
        const auto r = dual_waterfill_circuit(h, 1.0, p_c, beta);
        REQUIRE(r.feasible);
        const std::vector<double> a{beta * h[0], beta * h[1]};
        double grid = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double x = i / 1000.0;
            if ((1.0 - beta) * (4.0 * x + (1.0 - x)) < p_c)
                continue;
            grid = std::max(grid, log2_rate(a, std::vector<double>{x, 1.0 - x}));
        }
        CHECK_THAT(log2_rate(a, r.powers), WithinAbs(grid, 1e-3));
    }
}

TEST_CASE("dual waterfill flags an unreachable floor", "[allocation_core]")
{
    const std::vector<double> h{1.0, 2.0};
    const auto r = dual_waterfill_circuit(h, 1.0, 1.5, 0.5);
    CHECK_FALSE(r.feasible);
    CHECK(r.powers == std::vector<double>{0.0, 0.0});
}

TEST_CASE("dual waterfill KKT residuals on random instances", "[allocation_core]")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<double> h{u(rng), u(rng), u(rng), u(rng)};
        const double beta = frac(rng);
        const double p_t = u(rng);
        const double h_max = *std::max_element(h.begin(), h.end());
        const double p_c = frac(rng) * (1.0 - beta) * p_t * h_max;
        const auto r = dual_waterfill_circuit(h, p_t, p_c, beta);
        REQUIRE(r.feasible);
        double total = 0.0, harvest = 0.0;
        for (std::size_t n = 0; n < h.size(); ++n) {
            CHECK(r.powers[n] >= 0.0);
            total += r.powers[n];
            harvest += (1.0 - beta) * h[n] * r.powers[n];
        }
        CHECK_THAT(total, WithinAbs(p_t, 1e-9 * std::max(1.0, p_t)));
        CHECK(at_least(harvest, p_c));
        if (r.multipliers && r.multipliers->second > 0.0) {
            // Complementary slackness: a positive mu means the floor binds.
            CHECK(std::abs(harvest - p_c) <= 1e-7 * std::max(1.0, p_c));
        }
    }
}

TEST_CASE("greedy inversion serves the longest affordable prefix", "[allocation_core]")
{
    const std::vector<double> costs{1.0, 2.0, 3.0};
    const auto r = greedy_inversion(costs, 4.0);
    CHECK(r.count == 2);
    CHECK(r.powers == std::vector<double>{1.0, 2.0, 0.0});
    CHECK(greedy_inversion(costs, 0.0).count == 0);
    CHECK(greedy_inversion(std::vector<double>{5.0}, 10.0).powers == std::vector<double>{5.0});
    CHECK_THROWS_AS(greedy_inversion(std::vector<double>{2.0, 1.0}, 4.0), InvalidScenario);
}
