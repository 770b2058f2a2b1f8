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
#include "swipt/policy_mu_ul.hpp"

using namespace swipt;
using Catch::Matchers::WithinAbs;

namespace {

ScenarioParams mu_ul(double p_t, double p_c, std::size_t K, RateMode mode = RateMode::variable)
{
    ScenarioParams p;
    p.user_mode = UserMode::multi;
    p.it_direction = LinkDirection::uplink;
    p.p_t = p_t;
    p.p_c = p_c;
    p.K = K;
    p.rate_mode = mode;
    return p;
}

} // namespace

TEST_CASE("prefix scheduler serves the strongest power tone", "[policy_mu_ul]")
{
    const auto p = mu_ul(2.0, 0.5, 2);
    const auto ch = ChannelRealization::uplink({1.0, 0.5}, {1.0, 1.0});
    const auto a = solve_mu_ul_variable(ch, p);
    REQUIRE(a.feasible);
    CHECK(a.diagnostics.stream_count == std::size_t{1});
    CHECK_THAT(a.downlink_powers[0], WithinAbs(2.0, 1e-12));
    CHECK(a.downlink_powers[1] == 0.0);
    CHECK_THAT(a.uplink_powers[0], WithinAbs(1.5, 1e-12));
    CHECK(a.uplink_powers[1] == 0.0);
    CHECK_THAT(throughput_mu_ul(a, ch, p).sum_rate, WithinAbs(std::log2(2.5), 1e-12));
}

TEST_CASE("exhaustive scheduling never loses to the prefix scheduler", "[policy_mu_ul]")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lg(std::log(0.1), std::log(10.0));
    for (int i = 0; i < 300; ++i) {
        auto p = mu_ul(std::exp(lg(rng)), 0.0, 5);
        std::vector<double> gp(5), g(5);
        for (std::size_t n = 0; n < 5; ++n) {
            gp[n] = std::exp(lg(rng));
            g[n] = std::exp(lg(rng));
        }
        p.p_c = std::uniform_real_distribution<double>(0.0, p.p_t)(rng);
        const auto ch = ChannelRealization::uplink(gp, g);
        const auto heuristic = solve_mu_ul_variable(ch, p);
        const auto best = exhaustive_schedule_mu_ul_variable(ch, p);
        CHECK(throughput_mu_ul(best, ch, p).sum_rate >= throughput_mu_ul(heuristic, ch, p).sum_rate - 1e-12);
        double spent = 0.0;
        for (double x : best.downlink_powers)
            spent += x;
        CHECK(spent <= p.p_t * (1.0 + 1e-12));
    }
}

TEST_CASE("multi-user uplink infeasible when no mobile reaches the floor", "[policy_mu_ul]")
{
    const auto p = mu_ul(1.0, 2.0, 2);
    const auto ch = ChannelRealization::uplink({1.0, 0.5}, {1.0, 1.0});
    for (const auto& a : {solve_mu_ul_variable(ch, p), exhaustive_schedule_mu_ul_variable(ch, p)}) {
        CHECK_FALSE(a.feasible);
        CHECK(throughput_mu_ul(a, ch, p).sum_rate == 0.0);
    }
}

TEST_CASE("prefix scheduler rejects zero gains", "[policy_mu_ul]")
{
    const auto p = mu_ul(1.0, 0.1, 2);
    CHECK_THROWS_AS(solve_mu_ul_variable(ChannelRealization::uplink({1.0, 0.0}, {1.0, 1.0}), p), InvalidScenario);
}

TEST_CASE("fixed-rate multi-user uplink example", "[policy_mu_ul]")
{
    auto p = mu_ul(2.0, 0.5, 2, RateMode::fixed);
    p.theta = 1.0;
    const auto ch = ChannelRealization::uplink({1.0, 0.5}, {1.0, 1.0});
    const auto v = closed_loop_costs(ch, p.p_c, p.theta);
    CHECK_THAT(v[0], WithinAbs(1.5, 1e-15));
    CHECK_THAT(v[1], WithinAbs(3.0, 1e-15));
    const auto a = solve_mu_ul_fixed(ch, p);
    CHECK(a.diagnostics.stream_count == std::size_t{1});
    CHECK_THAT(a.downlink_powers[0], WithinAbs(1.5, 1e-15));
    CHECK(a.downlink_powers[1] == 0.0);
    CHECK_THAT(a.uplink_powers[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(throughput_mu_ul(a, ch, p).sum_rate, WithinAbs(1.0, 1e-15));
}

TEST_CASE("closed-loop costs handle zero gains and zero threshold", "[policy_mu_ul]")
{
    const auto ch = ChannelRealization::uplink({0.0, 2.0, 1.0}, {1.0, 0.0, 4.0});
    const auto v = closed_loop_costs(ch, 1.0, 2.0);
    CHECK(std::isinf(v[0]));
    CHECK(std::isinf(v[1]));
    CHECK_THAT(v[2], WithinAbs(1.5, 1e-15));
    const auto w = closed_loop_costs(ch, 1.0, 0.0);
    CHECK(std::isinf(w[0]));
    CHECK_THAT(w[1], WithinAbs(0.5, 1e-15));
}

TEST_CASE("multi-user uplink throughput gates each mobile separately", "[policy_mu_ul]")
{
    const auto p = mu_ul(2.0, 0.5, 2);
    const auto ch = ChannelRealization::uplink({1.0, 1.0}, {1.0, 1.0});
    Allocation a;
    a.downlink_powers = {1.5, 0.4}; // second mobile harvests 0.4 < 0.5
    a.uplink_powers = {1.0, 0.0};
    const auto r = throughput_mu_ul(a, ch, p);
    CHECK_THAT(r.stream_rates[0], WithinAbs(1.0, 1e-15));
    CHECK(r.stream_rates[1] == 0.0);
}
