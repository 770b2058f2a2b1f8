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

#include "catch_amalgamated.hpp"
#include "swipt/policy_su_ul.hpp"

using namespace swipt;
using Catch::Matchers::WithinAbs;

namespace {

ScenarioParams su_ul(double p_t, double p_c, std::size_t K, RateMode mode = RateMode::variable)
{
    ScenarioParams p;
    p.it_direction = LinkDirection::uplink;
    p.p_t = p_t;
    p.p_c = p_c;
    p.K = K;
    p.rate_mode = mode;
    return p;
}

} // namespace

TEST_CASE("variable-rate single-user uplink example", "[policy_su_ul]")
{
    const auto p = su_ul(2.0, 0.5, 2);
    const auto ch = ChannelRealization::uplink({0.5, 1.0}, {1.0, 0.5});
    const auto a = solve_su_ul_variable(ch, p);
    REQUIRE(a.feasible);
    CHECK(a.downlink_powers == std::vector<double>{0.0, 2.0});
    CHECK_THAT(a.uplink_powers[0], WithinAbs(1.25, 1e-12));
    CHECK_THAT(a.uplink_powers[1], WithinAbs(0.25, 1e-12));
    CHECK_THAT(*a.diagnostics.water_level, WithinAbs(2.25, 1e-12));
    const auto r = throughput_su_ul(a, ch, p);
    CHECK_THAT(r.sum_rate, WithinAbs(std::log2(2.25) + std::log2(1.125), 1e-12));
    CHECK_THAT(r.sum_rate, WithinAbs(1.3398500028846247, 1e-12));
    CHECK_THAT(r.spectral_efficiency, WithinAbs(0.66992500144231235, 1e-12));
}

TEST_CASE("single-user uplink infeasible below the circuit floor", "[policy_su_ul]")
{
    const auto p = su_ul(1.0, 2.0, 2);
    const auto ch = ChannelRealization::uplink({0.5, 1.0}, {1.0, 0.5});
    const auto a = solve_su_ul_variable(ch, p);
    CHECK_FALSE(a.feasible);
    CHECK(a.uplink_powers == std::vector<double>{0.0, 0.0});
    CHECK(throughput_su_ul(a, ch, p).sum_rate == 0.0);
}

TEST_CASE("equal uplink gains get equal uplink power", "[policy_su_ul]")
{
    const auto p = su_ul(3.0, 0.5, 3);
    const auto ch = ChannelRealization::uplink({0.2, 1.0, 0.4}, {2.0, 2.0, 2.0});
    const auto a = solve_su_ul_variable(ch, p);
    CHECK_THAT(a.uplink_powers[0], WithinAbs(a.uplink_powers[1], 1e-12));
    CHECK_THAT(a.uplink_powers[1], WithinAbs(a.uplink_powers[2], 1e-12));
    CHECK_THAT(a.uplink_powers[0] * 3.0, WithinAbs(2.5, 1e-12));
}

TEST_CASE("power tone ties go to the lowest index", "[policy_su_ul]")
{
    const auto p = su_ul(1.0, 0.1, 2);
    const auto ch = ChannelRealization::uplink({1.0, 1.0}, {1.0, 1.0});
    CHECK(solve_su_ul_variable(ch, p).downlink_powers == std::vector<double>{1.0, 0.0});
}

TEST_CASE("fixed-rate single-user uplink greedy inversion", "[policy_su_ul]")
{
    auto p = su_ul(2.0, 0.5, 2, RateMode::fixed);
    p.theta = 1.0;
    const auto ch = ChannelRealization::uplink({1.0, 0.5}, {2.0, 1.0});
    const auto a = solve_su_ul_fixed(ch, p);
    CHECK(a.diagnostics.stream_count == std::size_t{2});
    CHECK_THAT(a.uplink_powers[0], WithinAbs(0.5, 1e-15));
    CHECK_THAT(a.uplink_powers[1], WithinAbs(1.0, 1e-15));
    CHECK_THAT(throughput_su_ul(a, ch, p).sum_rate, WithinAbs(2.0, 1e-15));
}

TEST_CASE("fixed-rate single-user uplink edge cases", "[policy_su_ul]")
{
    auto p = su_ul(2.0, 1.8, 2, RateMode::fixed);
    p.theta = 1.0;
    const auto ch = ChannelRealization::uplink({1.0, 0.5}, {2.0, 1.0});
    CHECK(solve_su_ul_fixed(ch, p).diagnostics.stream_count == std::size_t{0}); // budget 0.2 < 0.5

    p.p_c = 0.5;
    p.theta = 1e-9;
    CHECK(solve_su_ul_fixed(ch, p).diagnostics.stream_count == std::size_t{2});

    // Boundary p_t max g' = p_c is feasible with a zero uplink budget.
    p.p_c = 2.0;
    const auto a = solve_su_ul_fixed(ch, p);
    CHECK(a.feasible);
    CHECK(a.diagnostics.stream_count == std::size_t{0});
}

TEST_CASE("single-user uplink throughput rejects overspent budgets", "[policy_su_ul]")
{
    const auto p = su_ul(2.0, 0.5, 2);
    const auto ch = ChannelRealization::uplink({0.5, 1.0}, {1.0, 0.5});
    Allocation a;
    a.downlink_powers = {0.0, 2.0};
    a.uplink_powers = {1.0, 1.0}; // 2 > 1.5
    CHECK_THROWS_AS(throughput_su_ul(a, ch, p), InvalidAllocation);
}

TEST_CASE("single-user uplink throughput is zero below the circuit floor", "[policy_su_ul]")
{
    const auto p = su_ul(2.0, 3.0, 2);
    const auto ch = ChannelRealization::uplink({0.5, 1.0}, {1.0, 0.5});
    Allocation a;
    a.downlink_powers = {0.0, 2.0}; // harvests 2 < 3
    a.uplink_powers = {1.0, 1.0};
    CHECK(throughput_su_ul(a, ch, p).sum_rate == 0.0);
}
