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

#ifndef SWIPT_CHANNEL_MODEL_HPP
#define SWIPT_CHANNEL_MODEL_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "swipt/types.hpp"

namespace swipt {

inline constexpr double kSpeedOfLight = 3.0e8; // m/s

using Rng = std::mt19937_64;

/// Seed an engine from (master seed, stream index) so independent trials
/// never share a stream.
inline Rng make_rng(std::uint64_t master_seed, std::uint64_t stream = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x5717u};
    return Rng(seq);
}

struct LinkGeometry {
    double wavelength = kSpeedOfLight / 5.8e9; // m
    double aperture_tx = 1.0;                  // m^2
    double aperture_rx = 0.05;                 // m^2
    double distance = 100.0;                   // m

    void validate() const
    {
        if (!(wavelength > 0.0) || !(aperture_tx > 0.0) || !(aperture_rx > 0.0) || !(distance > 0.0))
            throw InvalidScenario("link geometry: wavelength, apertures and distance must be positive");
    }
};

struct FadingSample {
    std::complex<double> z{1.0, 0.0};
    double power() const noexcept { return std::norm(z); }
};

/// Site layout shared by all links: apertures plus one distance per mobile.
struct SiteGeometry {
    double carrier_hz = 5.8e9;
    double bs_aperture = 1.0;           // whole base-station array
    double bs_subarray_aperture = 0.5;  // each half of the array in uplink-IT mode
    double mobile_antenna_aperture = 0.05;
    std::vector<double> distances{100.0};

    double wavelength() const { return kSpeedOfLight / carrier_hz; }

    LinkGeometry link(double a_tx, double a_rx, double distance) const
    {
        return LinkGeometry{wavelength(), a_tx, a_rx, distance};
    }

    friend bool operator==(const SiteGeometry&, const SiteGeometry&) = default;
};

/// Z ~ CN(1, 0.2): unit mean, variance 0.1 on each of the real and imaginary parts.
template <class Engine>
FadingSample sample_fading(Engine& rng)
{
    std::normal_distribution<double> re(1.0, std::sqrt(0.1));
    std::normal_distribution<double> im(0.0, std::sqrt(0.1));
    const double x = re(rng);
    const double y = im(rng);
    return FadingSample{{x, y}};
}

/// Linear power gain P_r / P_t = A_t A_r |Z|^2 / (lambda^2 r^2).
inline double link_gain(const LinkGeometry& geom, const FadingSample& z)
{
    geom.validate();
    return geom.aperture_tx * geom.aperture_rx * z.power() /
           (geom.wavelength * geom.wavelength * geom.distance * geom.distance);
}

/// Distance of the mobile behind sub-channel n. A single-user site has one
/// entry reused for every sub-channel.
inline double distance_for(const ScenarioParams& p, const SiteGeometry& site, std::size_t n)
{
    return p.user_mode == UserMode::single ? site.distances.front() : site.distances[n];
}

/// Draw one independent slot. Downlink-IT: each mobile antenna sees its own
/// fading and h_n = h_dot_n + h_ddot_n. Uplink-IT: the power-tone gain g' uses
/// one base-station sub-array for transmission, the data gain g the other for
/// reception.
template <class Engine>
ChannelRealization draw_realization(const ScenarioParams& p, const SiteGeometry& site, double noise_variance,
                                    Engine& rng)
{
    p.validate();
    if (!(noise_variance > 0.0))
        throw InvalidScenario("channel: noise variance must be positive");
    const std::size_t expected = p.user_mode == UserMode::single ? 1 : p.K;
    if (site.distances.size() != expected)
        throw InvalidScenario("channel: geometry table length does not match the number of mobiles");

    ChannelRealization ch;
    ch.mode = p.it_direction;
    ch.noise_variance_used = noise_variance;
    if (p.it_direction == LinkDirection::downlink) {
        ch.h.resize(p.K);
        ch.h_dot.resize(p.K);
        ch.h_ddot.resize(p.K);
        for (std::size_t n = 0; n < p.K; ++n) {
            const auto geom = site.link(site.bs_aperture, site.mobile_antenna_aperture, distance_for(p, site, n));
            ch.h_dot[n] = link_gain(geom, sample_fading(rng)) / noise_variance;
            ch.h_ddot[n] = link_gain(geom, sample_fading(rng)) / noise_variance;
            ch.h[n] = ch.h_dot[n] + ch.h_ddot[n];
        }
    } else {
        ch.g_prime.resize(p.K);
        ch.g_up.resize(p.K);
        for (std::size_t n = 0; n < p.K; ++n) {
            const double r = distance_for(p, site, n);
            const auto down = site.link(site.bs_subarray_aperture, site.mobile_antenna_aperture, r);
            const auto up = site.link(site.mobile_antenna_aperture, site.bs_subarray_aperture, r);
            ch.g_prime[n] = link_gain(down, sample_fading(rng)) / noise_variance;
            ch.g_up[n] = link_gain(up, sample_fading(rng));
        }
    }
    return ch;
}

inline ChannelRealization draw_realization(const ScenarioParams& p, const SiteGeometry& site, double noise_variance,
                                           std::uint64_t seed)
{
    auto rng = make_rng(seed);
    return draw_realization(p, site, noise_variance, rng);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

} // namespace swipt

#endif // SWIPT_CHANNEL_MODEL_HPP
