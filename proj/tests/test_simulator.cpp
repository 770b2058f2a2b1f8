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
#include "swipt/simulator.hpp"

using namespace swipt;
using Catch::Matchers::WithinAbs;

namespace {

SimConfig small_config(UserMode u, LinkDirection d, RateMode r)
{
    SimConfig c;
    c.scenario.user_mode = u;
    c.scenario.it_direction = d;
    c.scenario.rate_mode = r;
    c.scenario.theta = db_to_linear(d == LinkDirection::downlink ? 30.0 : 7.0);
    if (u == UserMode::multi) {
        c.scenario.p_t = 20.0;
        c.site.distances = {50, 80, 100, 150, 200};
    }
    c.p_c_dbm = {-20, 0, 10, 20, 30};
    c.trials = 12;
    c.seed = 21;
    c.policies = {PolicyKind::optimal, PolicyKind::equal_power, PolicyKind::tdipt};
    c.threads = 1;
    return c;
}

} // namespace

TEST_CASE("equal-power baseline example", "[simulator]")
{
    ScenarioParams p;
    p.p_t = 2.0;
    p.p_c = 0.5;
    p.K = 2;
    const auto r = equal_power_solve(p, ChannelRealization::downlink({1.0, 1.0}));
    CHECK_THAT(r.sum_rate, WithinAbs(1.9530820543520222, 1e-12));
}

TEST_CASE("time-division baseline example", "[simulator]")
{
    ScenarioParams p;
    p.p_t = 2.0;
    p.p_c = 0.5;
    p.K = 1;
    const auto ch = ChannelRealization::downlink({1.0});
    CHECK_THAT(tdipt_solve(p, ch).sum_rate, WithinAbs(0.792481250360578, 1e-12));
    p.p_c = 1.01; // p_t h < 2 p_c
    CHECK(tdipt_solve(p, ch).sum_rate == 0.0);
}

TEST_CASE("policy names round-trip", "[simulator]")
{
    for (auto k : {PolicyKind::optimal, PolicyKind::equal_power, PolicyKind::tdipt, PolicyKind::exhaustive})
        CHECK(parse_policy(to_string(k)) == k);
    CHECK_THROWS_AS(parse_policy("greedy"), InvalidScenario);
}

TEST_CASE("exhaustive policy is only valid for multi-user variable uplink", "[simulator]")
{
    auto c = small_config(UserMode::single, LinkDirection::downlink, RateMode::variable);
    c.policies = {PolicyKind::exhaustive};
    CHECK_THROWS_AS(c.validate(), InvalidScenario);
    c = small_config(UserMode::multi, LinkDirection::uplink, RateMode::variable);
    c.policies = {PolicyKind::exhaustive};
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("sweep is deterministic and independent of the thread count", "[simulator]")
{
    auto c = small_config(UserMode::multi, LinkDirection::downlink, RateMode::variable);
    const auto serial = run_sweep(c);
    c.threads = 4;
    const auto threaded = run_sweep(c);
    REQUIRE(serial.curves.size() == threaded.curves.size());
    for (std::size_t i = 0; i < serial.curves.size(); ++i) {
        CHECK(serial.curves[i].policy == threaded.curves[i].policy);
        REQUIRE(serial.curves[i].points.size() == threaded.curves[i].points.size());
        for (std::size_t j = 0; j < serial.curves[i].points.size(); ++j) {
            CHECK(serial.curves[i].points[j].mean_se == threaded.curves[i].points[j].mean_se);
            CHECK(serial.curves[i].points[j].std_se == threaded.curves[i].points[j].std_se);
        }
    }
}

TEST_CASE("curves are sorted and non-increasing in circuit power", "[simulator]")
{
    for (auto u : {UserMode::single, UserMode::multi})
        for (auto d : {LinkDirection::downlink, LinkDirection::uplink})
            for (auto r : {RateMode::variable, RateMode::fixed}) {
                auto c = small_config(u, d, r);
                c.p_c_dbm = {30, -20, 10, 0, 20}; // deliberately unsorted
                const auto set = run_sweep(c);
                REQUIRE(set.curves.size() == 3);
                CHECK(set.curves[0].policy == "equal_power");
                CHECK(set.curves[1].policy == "optimal");
                CHECK(set.curves[2].policy == "tdipt");
                for (const auto& curve : set.curves) {
                    INFO(scenario_tag(c.scenario) << ' ' << curve.policy);
                    for (std::size_t i = 1; i < curve.points.size(); ++i) {
                        CHECK(curve.points[i - 1].p_c_dbm < curve.points[i].p_c_dbm);
                        CHECK(curve.points[i].mean_se <= curve.points[i - 1].mean_se + 1e-12);
                    }
                }
            }
}

TEST_CASE("universally infeasible circuit power gives zero efficiency", "[simulator]")
{
    auto c = small_config(UserMode::single, LinkDirection::downlink, RateMode::variable);
    c.p_c_dbm = {80.0};
    const auto set = run_sweep(c);
    for (const auto& curve : set.curves) {
        CHECK(curve.points[0].mean_se == 0.0);
        CHECK(curve.points[0].std_se == 0.0);
        CHECK(curve.points[0].trials == c.trials);
    }
}

TEST_CASE("crossing interpolates between sweep points", "[simulator]")
{
    Curve c{"optimal", {{0.0, 10.0, 0.0, 1}, {10.0, 6.0, 0.0, 1}, {20.0, 2.0, 0.0, 1}}};
    CHECK_THAT(*crossing_dbm(c, 0.5), WithinAbs(12.5, 1e-12));
    CHECK_FALSE(crossing_dbm(c, 0.1).has_value());
    CHECK_FALSE(crossing_dbm(Curve{}, 0.5).has_value());
}
