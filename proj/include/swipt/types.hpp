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

#ifndef SWIPT_TYPES_HPP
#define SWIPT_TYPES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swipt {

// Unit system used by every solver
// --------------------------------
// Receiver noise has unit power. Base-station powers (p_t, P_n) are in watts
// and the gains they multiply (h, g') are divided by the noise variance, so
// P_n h_n is an SNR / harvested power expressed in noise units. The circuit
// power p_c and the mobile's uplink power Q_n live in the same noise units,
// which is why the uplink gain g is kept as a plain propagation gain:
// Q_n g_n is then the uplink SNR.

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario or channel violates an invariant (caller or config bug).
class InvalidScenario : public Error {
public:
    using Error::Error;
};

/// An allocation handed to an evaluator breaks a hard constraint.
class InvalidAllocation : public Error {
public:
    using Error::Error;
};

enum class UserMode { single, multi };
enum class LinkDirection { downlink, uplink };
enum class RateMode { variable, fixed };

/// Absolute tolerance on constraint checks, scaled by max(1, |target|).
inline constexpr double kConstraintTolerance = 1e-9;

/// value >= target, forgiving rounding at the boundary.
inline bool at_least(double value, double target) noexcept
{
    return value >= target - kConstraintTolerance * std::max(1.0, std::abs(target));
}

struct ScenarioParams {
    UserMode user_mode = UserMode::single;
    LinkDirection it_direction = LinkDirection::downlink;
    RateMode rate_mode = RateMode::variable;
    double p_t = 10.0;      // W
    double p_c = 0.0;       // noise units
    double theta = 1000.0;  // linear SNR threshold
    double sigma_a2 = 0.9;  // noise share before the splitter
    double sigma_b2 = 0.1;  // noise share after the splitter
    std::size_t K = 5;

    void validate() const
    {
        if (K < 1)
            throw InvalidScenario("scenario: K must be >= 1");
        if (!(p_t > 0.0) || !std::isfinite(p_t))
            throw InvalidScenario("scenario: p_t must be positive");
        if (!(p_c >= 0.0) || !std::isfinite(p_c))
            throw InvalidScenario("scenario: p_c must be nonnegative");
        if (sigma_a2 < 0.0 || sigma_b2 < 0.0 || std::abs(sigma_a2 + sigma_b2 - 1.0) > 1e-9)
            throw InvalidScenario("scenario: sigma_a2 + sigma_b2 must equal 1 (unit total noise)");
        if (rate_mode == RateMode::fixed && !(theta > 0.0))
            throw InvalidScenario("scenario: theta must be positive for fixed-rate coding");
    }

    friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

/// Effective scalar sub-channel gains for one slot, already in solver units.
struct ChannelRealization {
    LinkDirection mode = LinkDirection::downlink;
    std::vector<double> h;       // downlink IT: h = h_dot + h_ddot
    std::vector<double> h_dot;
    std::vector<double> h_ddot;
    std::vector<double> g_prime; // uplink IT: downlink power-tone gains
    std::vector<double> g_up;    // uplink IT: uplink data gains
    double noise_variance_used = 1.0;

    std::size_t size() const noexcept
    {
        return mode == LinkDirection::downlink ? h.size() : g_up.size();
    }

    static ChannelRealization downlink(std::vector<double> gains)
    {
        ChannelRealization ch;
        ch.mode = LinkDirection::downlink;
        ch.h_dot = gains;
        ch.h_ddot.assign(gains.size(), 0.0);
        ch.h = std::move(gains);
        return ch;
    }

    static ChannelRealization uplink(std::vector<double> g_prime, std::vector<double> g_up)
    {
        ChannelRealization ch;
        ch.mode = LinkDirection::uplink;
        ch.g_prime = std::move(g_prime);
        ch.g_up = std::move(g_up);
        return ch;
    }

    friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

struct SolveDiagnostics {
    std::optional<double> lambda_star;
    std::optional<double> mu_star;
    std::optional<double> water_level;
    std::optional<std::size_t> stream_count; // k*, L*, m_max, z_max/k*, or q_max
    std::vector<std::size_t> permutation;    // permutation[i] = original index of sorted slot i
};

struct Allocation {
    std::vector<double> downlink_powers; // P_n
    std::vector<double> beta;            // one ratio (single user) or one per mobile
    std::vector<double> uplink_powers;   // Q_n, uplink IT only
    bool feasible = false;
    SolveDiagnostics diagnostics;
};

struct ThroughputReport {
    double sum_rate = 0.0;           // bit/s/Hz summed over streams
    std::vector<double> stream_rates;
    double spectral_efficiency = 0.0; // sum_rate / K
};

namespace detail {

inline void require(bool cond, const char* msg)
{
    if (!cond)
        throw InvalidScenario(msg);
}

inline void require_gains(std::span<const double> gains, const char* what)
{
    if (gains.empty())
        throw InvalidScenario(std::string(what) + ": empty gain sequence");
    for (double g : gains)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw InvalidScenario(std::string(what) + ": gains must be finite and nonnegative");
}

inline void require_downlink(const ChannelRealization& ch, const ScenarioParams& p, const char* what)
{
    if (ch.mode != LinkDirection::downlink)
        throw InvalidScenario(std::string(what) + ": downlink-IT channel expected");
    require_gains(ch.h, what);
    if (ch.h.size() != p.K)
        throw InvalidScenario(std::string(what) + ": channel length does not match K");
}

inline void require_uplink(const ChannelRealization& ch, const ScenarioParams& p, const char* what)
{
    if (ch.mode != LinkDirection::uplink)
        throw InvalidScenario(std::string(what) + ": uplink-IT channel expected");
    require_gains(ch.g_prime, what);
    require_gains(ch.g_up, what);
    if (ch.g_prime.size() != ch.g_up.size() || ch.g_up.size() != p.K)
        throw InvalidScenario(std::string(what) + ": channel length does not match K");
}

/// Stable ordering by descending value; ties keep the lowest index first.
inline std::vector<std::size_t> descending_order(std::span<const double> v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
}

inline std::vector<std::size_t> ascending_order(std::span<const double> v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

inline std::vector<double> permuted(std::span<const double> v, std::span<const std::size_t> order)
{
    std::vector<double> out(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        out[i] = v[order[i]];
    return out;
}

/// Inverse of permuted(): scatter sorted-order values back to original slots.
inline std::vector<double> unpermuted(std::span<const double> sorted, std::span<const std::size_t> order)
{
    std::vector<double> out(order.size(), 0.0);
    for (std::size_t i = 0; i < order.size(); ++i)
        out[order[i]] = sorted[i];
    return out;
}

inline std::size_t argmax_lowest(std::span<const double> v)
{
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

inline double sum(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

inline ThroughputReport make_report(std::vector<double> rates, std::size_t K)
{
    ThroughputReport r;
    r.sum_rate = sum(rates);
    r.stream_rates = std::move(rates);
    r.spectral_efficiency = r.sum_rate / static_cast<double>(K);
    return r;
}

} // namespace detail

inline const char* to_string(UserMode m) { return m == UserMode::single ? "single" : "multi"; }
inline const char* to_string(LinkDirection d) { return d == LinkDirection::downlink ? "downlink" : "uplink"; }
inline const char* to_string(RateMode r) { return r == RateMode::variable ? "variable" : "fixed"; }

/// Short scenario tag such as "su_dl_variable".
inline std::string scenario_tag(const ScenarioParams& p)
{
    std::string s = p.user_mode == UserMode::single ? "su_" : "mu_";
    s += p.it_direction == LinkDirection::downlink ? "dl_" : "ul_";
    s += to_string(p.rate_mode);
    return s;
}

} // namespace swipt

#endif // SWIPT_TYPES_HPP
