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
#include "swipt/simulator.hpp"

using namespace swipt;
using Catch::Matchers::WithinAbs;

namespace {

ScenarioParams su_dl(double p_t, double p_c, std::size_t K, RateMode mode = RateMode::variable)
{
    ScenarioParams p;
    p.p_t = p_t;
    p.p_c = p_c;
    p.K = K;
    p.rate_mode = mode;
    return p;
}

} // namespace

TEST_CASE("splitting ratio for one stream", "[policy_su_dl]")
{
    auto p = su_dl(2.0, 0.1, 1, RateMode::fixed);
    p.theta = 1.0;
    const auto r = splitting_ratio(p, 1);
    CHECK_THAT(r.beta, WithinAbs(0.901085803183, 1e-11));
    CHECK_THAT(r.beta + r.one_minus_beta, WithinAbs(1.0, 1e-15));
}

TEST_CASE("splitting ratio is 1 without circuit power and stays in [0, 1]", "[policy_su_dl]")
{
    auto p = su_dl(2.0, 0.0, 5, RateMode::fixed);
    for (std::size_t k = 1; k <= 5; ++k) {
        CHECK(splitting_ratio(p, k).beta == 1.0);
        CHECK(splitting_ratio(p, k).one_minus_beta == 0.0);
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 1000; ++i) {
        p.theta = std::pow(10.0, u(rng));
        p.p_c = std::pow(10.0, u(rng));
        const auto r = splitting_ratio(p, 1 + static_cast<std::size_t>(i % 5));
        CHECK(r.beta >= 0.0);
        CHECK(r.beta <= 1.0);
    }
}

TEST_CASE("fixed-rate single-user downlink closed form", "[policy_su_dl]")
{
    auto p = su_dl(2.0, 0.1, 1, RateMode::fixed);
    p.theta = 1.0;
    const auto ch = ChannelRealization::downlink({1.0});
    const auto a = solve_su_dl_fixed(ch, p);
    REQUIRE(a.feasible);
    CHECK(a.diagnostics.stream_count == std::size_t{1});
    CHECK_THAT(a.beta[0], WithinAbs(0.901085803183, 1e-11));
    CHECK_THAT(a.downlink_powers[0], WithinAbs(1.010977222865, 1e-11));
    CHECK_THAT((1.0 - a.beta[0]) * a.downlink_powers[0], WithinAbs(0.1, 1e-12));
    const double snr = a.beta[0] * a.downlink_powers[0] / (a.beta[0] * 0.9 + 0.1);
    CHECK_THAT(snr, WithinAbs(1.0, 1e-12));
    CHECK_THAT(throughput_su_dl(a, ch, p).sum_rate, WithinAbs(1.0, 1e-15));
}

TEST_CASE("fixed-rate single-user downlink with no affordable stream", "[policy_su_dl]")
{
    auto p = su_dl(0.5, 0.1, 1, RateMode::fixed);
    p.theta = 1.0;
    const auto ch = ChannelRealization::downlink({1.0});
    const auto a = solve_su_dl_fixed(ch, p);
    CHECK_FALSE(a.feasible);
    CHECK(a.downlink_powers == std::vector<double>{0.0});
    CHECK(throughput_su_dl(a, ch, p).sum_rate == 0.0);
}

TEST_CASE("fixed-rate equalities hold for every served stream", "[policy_su_dl]")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> lg(std::log(0.1), std::log(10.0));
    for (int i = 0; i < 500; ++i) {
        auto p = su_dl(std::exp(lg(rng)) * 3.0, 0.0, 4, RateMode::fixed);
        p.theta = std::exp(lg(rng));
        std::vector<double> h(4);
        for (auto& x : h)
            x = std::exp(lg(rng));
        p.p_c = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        const auto ch = ChannelRealization::downlink(h);
        const auto a = solve_su_dl_fixed(ch, p);
        double harvest = 0.0;
        for (std::size_t n = 0; n < 4; ++n) {
            harvest += (1.0 - a.beta[0]) * a.downlink_powers[n] * h[n];
            if (a.downlink_powers[n] > 0.0) {
                const double snr = a.beta[0] * a.downlink_powers[n] * h[n] / (a.beta[0] * 0.9 + 0.1);
                CHECK_THAT(snr, WithinAbs(p.theta, 1e-9 * p.theta));
            }
        }
        if (a.feasible) {
            CHECK_THAT(harvest, WithinAbs(p.p_c, 1e-9 * std::max(1.0, p.p_c)));
        }
    }
}

TEST_CASE("variable-rate single-user downlink on a symmetric channel", "[policy_su_dl]")
{
    const auto p = su_dl(2.0, 0.5, 2);
    const auto ch = ChannelRealization::downlink({1.0, 1.0});
    const auto a = solve_su_dl_variable(ch, p);
    REQUIRE(a.feasible);
    CHECK_THAT(a.downlink_powers[0], WithinAbs(a.downlink_powers[1], 1e-6));
    // Exact optimum over the whole (beta, P) space, from an independent grid.
    CHECK_THAT(throughput_su_dl(a, ch, p).sum_rate, WithinAbs(1.9530820543520222, 1e-6));
}

TEST_CASE("variable-rate single-user downlink matches the exact optimum on h = [4, 1]", "[policy_su_dl]")
{
    const auto p = su_dl(1.0, 0.3, 2);
    const auto ch = ChannelRealization::downlink({4.0, 1.0});
    const auto a = solve_su_dl_variable(ch, p);
    CHECK_THAT(throughput_su_dl(a, ch, p).sum_rate, WithinAbs(2.328417622687369, 1e-6));
    // The bound-based variants are admissible but never beat the exact search.
    for (auto bound : {RateBound::lower, RateBound::upper}) {
        const auto b = solve_su_dl_variable(ch, p, bound);
        CHECK(b.feasible);
        CHECK(throughput_su_dl(b, ch, p).sum_rate <= throughput_su_dl(a, ch, p).sum_rate + 1e-9);
        CHECK(at_least((1.0 - b.beta[0]) * (4.0 * b.downlink_powers[0] + b.downlink_powers[1]), p.p_c));
    }
}

TEST_CASE("variable-rate single-user downlink infeasible when p_t h_max < p_c", "[policy_su_dl]")
{
    const auto p = su_dl(0.5, 1.0, 1);
    const auto ch = ChannelRealization::downlink({1.0});
    const auto a = solve_su_dl_variable(ch, p);
    CHECK_FALSE(a.feasible);
    CHECK(a.downlink_powers == std::vector<double>{0.0});
    CHECK(throughput_su_dl(a, ch, p).sum_rate == 0.0);
}

TEST_CASE("single-user downlink throughput semantics", "[policy_su_dl]")
{
    auto p = su_dl(1.0, 0.0, 1);
    const auto ch = ChannelRealization::downlink({1.0});
    Allocation a;
    a.downlink_powers = {1.0};
    a.beta = {1.0};
    CHECK_THAT(throughput_su_dl(a, ch, p).sum_rate, WithinAbs(1.0, 1e-15));

    p.p_c = 0.2;
    a.beta = {0.9}; // harvests 0.1 < 0.2
    CHECK(throughput_su_dl(a, ch, p).sum_rate == 0.0);

    a.beta = {0.5, 0.5};
    CHECK_THROWS_AS(throughput_su_dl(a, ch, p), InvalidScenario);
}

TEST_CASE("variable-rate single-user downlink rejects malformed channels", "[policy_su_dl]")
{
    const auto p = su_dl(1.0, 0.1, 2);
    CHECK_THROWS_AS(solve_su_dl_variable(ChannelRealization::downlink({1.0}), p), InvalidScenario);
    CHECK_THROWS_AS(solve_su_dl_variable(ChannelRealization::uplink({1.0, 1.0}, {1.0, 1.0}), p), InvalidScenario);
}

TEST_CASE("variable-rate single-user downlink dominates equal power", "[policy_su_dl]")
{
    ScenarioParams p;
    SiteGeometry site;
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto rng = trial_rng(3, t);
        const auto ch = draw_realization(p, site, 1e-6, rng);
        for (double dbm : {-20.0, 10.0, 15.0, 17.0, 19.0}) {
            p.p_c = dbm_to_watts(dbm) / 1e-6;
            const double opt = throughput_su_dl(solve_su_dl_variable(ch, p), ch, p).sum_rate;
            CHECK(opt >= equal_power_solve(p, ch).sum_rate - 1e-9);
        }
    }
}
