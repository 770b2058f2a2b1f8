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

#ifndef SWIPT_IO_HPP
#define SWIPT_IO_HPP

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "swipt/simulator.hpp"

namespace swipt {

class ConfigError : public Error {
public:
    using Error::Error;
};

inline constexpr int kSchemaVersion = 1;

/// Parsed configuration file. dB quantities are kept as written so a dumped
/// config re-parses identically; `sim` holds the linear values.
struct CliConfig {
    SimConfig sim;
    double theta_db = 30.0;
    double noise_dbm = -30.0;
    std::string output_path;
    std::string output_format = "csv";

    friend bool operator==(const CliConfig& a, const CliConfig& b)
    {
        const auto& x = a.sim;
        const auto& y = b.sim;
        return x.scenario == y.scenario && x.site == y.site && x.noise_variance_w == y.noise_variance_w &&
               x.p_c_dbm == y.p_c_dbm && x.trials == y.trials && x.policies == y.policies && x.seed == y.seed &&
               x.threads == y.threads && a.theta_db == b.theta_db && a.noise_dbm == b.noise_dbm &&
               a.output_path == b.output_path && a.output_format == b.output_format;
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object())
        throw ConfigError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("config: unknown key '" + where + "." + key + "'");
}

template <class T>
T read_or(const nlohmann::json& obj, const char* key, T fallback, const std::string& where)
{
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config: '" + where + "." + key + "' has the wrong type");
    }
}

inline UserMode parse_user_mode(const std::string& s)
{
    if (s == "single") return UserMode::single;
    if (s == "multi") return UserMode::multi;
    throw ConfigError("config: user_mode must be 'single' or 'multi'");
}

inline LinkDirection parse_direction(const std::string& s)
{
    if (s == "downlink") return LinkDirection::downlink;
    if (s == "uplink") return LinkDirection::uplink;
    throw ConfigError("config: it_direction must be 'downlink' or 'uplink'");
}

inline RateMode parse_rate_mode(const std::string& s)
{
    if (s == "variable") return RateMode::variable;
    if (s == "fixed") return RateMode::fixed;
    throw ConfigError("config: rate_mode must be 'variable' or 'fixed'");
}

} // namespace detail

/// Default sweep axis in dBm: from a negligible circuit load to beyond the
/// largest harvestable power.
inline std::vector<double> default_p_c_sweep()
{
    std::vector<double> v;
    for (int dbm = -20; dbm <= 30; dbm += 2)
        v.push_back(static_cast<double>(dbm));
    return v;
}

/// Validate and convert a JSON config. Missing fields take the defaults of
/// the scenario's (user mode, direction).
inline CliConfig config_from_json(const nlohmann::json& j)
{
    using detail::read_or;
    detail::reject_unknown_keys(j, {"schema_version", "scenario", "geometry", "sim", "output"}, "root");
    if (!j.contains("schema_version"))
        throw ConfigError("config: missing schema_version");
    const int version = read_or<int>(j, "schema_version", 0, "root");
    if (version != kSchemaVersion)
        throw ConfigError("config: unsupported schema_version " + std::to_string(version));

    CliConfig c;
    auto& sc = c.sim.scenario;
    const auto scen = j.value("scenario", nlohmann::json::object());
    detail::reject_unknown_keys(scen,
                                {"user_mode", "it_direction", "rate_mode", "p_t_w", "p_c_dbm", "theta_db", "sigma_a2",
                                 "sigma_b2", "K", "noise_dbm"},
                                "scenario");
    sc.user_mode = detail::parse_user_mode(read_or<std::string>(scen, "user_mode", "single", "scenario"));
    sc.it_direction = detail::parse_direction(read_or<std::string>(scen, "it_direction", "downlink", "scenario"));
    sc.rate_mode = detail::parse_rate_mode(read_or<std::string>(scen, "rate_mode", "variable", "scenario"));
    const bool single = sc.user_mode == UserMode::single;
    const bool down = sc.it_direction == LinkDirection::downlink;
    sc.p_t = read_or<double>(scen, "p_t_w", single ? 10.0 : 20.0, "scenario");
    sc.sigma_a2 = read_or<double>(scen, "sigma_a2", 0.9, "scenario");
    sc.sigma_b2 = read_or<double>(scen, "sigma_b2", 0.1, "scenario");
    sc.K = read_or<std::size_t>(scen, "K", 5, "scenario");
    c.theta_db = read_or<double>(scen, "theta_db", down ? 30.0 : 7.0, "scenario");
    c.noise_dbm = read_or<double>(scen, "noise_dbm", -30.0, "scenario");
    c.sim.p_c_dbm = read_or<std::vector<double>>(scen, "p_c_dbm", default_p_c_sweep(), "scenario");
    sc.theta = db_to_linear(c.theta_db);
    c.sim.noise_variance_w = dbm_to_watts(c.noise_dbm);
    sc.p_c = c.sim.p_c_normalized(0);

    const auto geo = j.value("geometry", nlohmann::json::object());
    detail::reject_unknown_keys(
        geo, {"carrier_hz", "bs_aperture_m2", "bs_subarray_aperture_m2", "mobile_aperture_m2", "distances_m"},
        "geometry");
    auto& site = c.sim.site;
    site.carrier_hz = read_or<double>(geo, "carrier_hz", 5.8e9, "geometry");
    site.bs_aperture = read_or<double>(geo, "bs_aperture_m2", 1.0, "geometry");
    site.bs_subarray_aperture = read_or<double>(geo, "bs_subarray_aperture_m2", 0.5, "geometry");
    site.mobile_antenna_aperture = read_or<double>(geo, "mobile_aperture_m2", 0.05, "geometry");
    site.distances = read_or<std::vector<double>>(
        geo, "distances_m", single ? std::vector<double>{100.0} : std::vector<double>{50, 80, 100, 150, 200},
        "geometry");
    if (!(site.bs_aperture > 0.0) || !(site.bs_subarray_aperture > 0.0) || !(site.mobile_antenna_aperture > 0.0))
        throw ConfigError("config: apertures must be positive");

    const auto sim = j.value("sim", nlohmann::json::object());
    detail::reject_unknown_keys(sim, {"trials", "seed", "policies", "threads"}, "sim");
    c.sim.trials = read_or<std::size_t>(sim, "trials", 200, "sim");
    c.sim.seed = read_or<std::uint64_t>(sim, "seed", 1, "sim");
    c.sim.threads = read_or<std::size_t>(sim, "threads", 0, "sim");
    const auto names = read_or<std::vector<std::string>>(sim, "policies", {"optimal", "equal_power", "tdipt"}, "sim");
    c.sim.policies.clear();
    try {
        for (const auto& n : names)
            c.sim.policies.push_back(parse_policy(n));
    } catch (const InvalidScenario& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    const auto out = j.value("output", nlohmann::json::object());
    detail::reject_unknown_keys(out, {"path", "format"}, "output");
    c.output_path = read_or<std::string>(out, "path", "", "output");
    c.output_format = read_or<std::string>(out, "format", "csv", "output");
    if (c.output_format != "csv" && c.output_format != "svg")
        throw ConfigError("config: output.format must be 'csv' or 'svg'");

    try {
        c.sim.validate();
    } catch (const InvalidScenario& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

inline nlohmann::json config_to_json(const CliConfig& c)
{
    const auto& sc = c.sim.scenario;
    const auto& site = c.sim.site;
    std::vector<std::string> policies;
    for (auto k : c.sim.policies)
        policies.emplace_back(to_string(k));
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["scenario"] = {{"user_mode", to_string(sc.user_mode)},
                     {"it_direction", to_string(sc.it_direction)},
                     {"rate_mode", to_string(sc.rate_mode)},
                     {"p_t_w", sc.p_t},
                     {"p_c_dbm", c.sim.p_c_dbm},
                     {"theta_db", c.theta_db},
                     {"sigma_a2", sc.sigma_a2},
                     {"sigma_b2", sc.sigma_b2},
                     {"K", sc.K},
                     {"noise_dbm", c.noise_dbm}};
    j["geometry"] = {{"carrier_hz", site.carrier_hz},
                     {"bs_aperture_m2", site.bs_aperture},
                     {"bs_subarray_aperture_m2", site.bs_subarray_aperture},
                     {"mobile_aperture_m2", site.mobile_antenna_aperture},
                     {"distances_m", site.distances}};
    j["sim"] = {{"trials", c.sim.trials}, {"seed", c.sim.seed}, {"policies", policies}, {"threads", c.sim.threads}};
    j["output"] = {{"path", c.output_path}, {"format", c.output_format}};
    return j;
}

inline CliConfig parse_config_text(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline CliConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

inline std::string format_g6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// CSV with one row per (policy, p_c), policies and p_c ascending.
inline void write_curves_csv(const CurveSet& curves, std::ostream& os)
{
    os << "policy,p_c_dBm,mean_se,std_se,trials\n";
    std::vector<const Curve*> sorted;
    for (const auto& c : curves.curves)
        sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(), [](const Curve* a, const Curve* b) { return a->policy < b->policy; });
    for (const auto* c : sorted) {
        auto points = c->points;
        std::stable_sort(points.begin(), points.end(),
                         [](const CurvePoint& a, const CurvePoint& b) { return a.p_c_dbm < b.p_c_dbm; });
        for (const auto& pt : points)
            os << c->policy << ',' << format_g6(pt.p_c_dbm) << ',' << format_g6(pt.mean_se) << ','
               << format_g6(pt.std_se) << ',' << pt.trials << '\n';
    }
}

/// Plot data as a standalone SVG: one polyline per policy, SE versus p_c.
inline void write_curves_svg(const CurveSet& curves, std::ostream& os)
{
    constexpr double W = 640, H = 420, L = 60, R = 150, T = 20, B = 50;
    double x0 = 0, x1 = 1, y1 = 1;
    bool first = true;
    for (const auto& c : curves.curves)
        for (const auto& pt : c.points) {
            x0 = first ? pt.p_c_dbm : std::min(x0, pt.p_c_dbm);
            x1 = first ? pt.p_c_dbm : std::max(x1, pt.p_c_dbm);
            y1 = std::max(y1, pt.mean_se);
            first = false;
        }
    if (x1 <= x0)
        x1 = x0 + 1.0;
    auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto sy = [&](double y) { return H - B - y / y1 * (H - T - B); };
    static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">circuit power (dBm)</text>\n";
    os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
       << ")\" text-anchor=\"middle\">SE (bit/s/Hz)</text>\n";
    os << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << format_g6(x0) << "</text>\n";
    os << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << format_g6(x1)
       << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\">" << format_g6(y1) << "</text>\n";
    std::size_t i = 0;
    for (const auto& c : curves.curves) {
        const char* color = colors[i % std::size(colors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& pt : c.points)
            os << format_g6(sx(pt.p_c_dbm)) << ',' << format_g6(sy(pt.mean_se)) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 20 + 18 * static_cast<double>(i) << "\" fill=\"" << color
           << "\">" << c.policy << "</text>\n";
        ++i;
    }
    os << "</svg>\n";
}

inline nlohmann::json allocation_to_json(const Allocation& a, const ThroughputReport& r)
{
    nlohmann::json j;
    j["feasible"] = a.feasible;
    j["downlink_powers"] = a.downlink_powers;
    if (!a.beta.empty())
        j["beta"] = a.beta;
    if (!a.uplink_powers.empty())
        j["uplink_powers"] = a.uplink_powers;
    j["sum_rate"] = r.sum_rate;
    j["stream_rates"] = r.stream_rates;
    j["spectral_efficiency"] = r.spectral_efficiency;
    auto& d = j["diagnostics"];
    d = nlohmann::json::object();
    if (a.diagnostics.lambda_star)
        d["lambda_star"] = *a.diagnostics.lambda_star;
    if (a.diagnostics.mu_star)
        d["mu_star"] = *a.diagnostics.mu_star;
    if (a.diagnostics.water_level)
        d["water_level"] = *a.diagnostics.water_level;
    if (a.diagnostics.stream_count)
        d["stream_count"] = *a.diagnostics.stream_count;
    if (!a.diagnostics.permutation.empty())
        d["permutation"] = a.diagnostics.permutation;
    return j;
}

inline nlohmann::json channel_to_json(const ChannelRealization& ch)
{
    nlohmann::json j;
    j["mode"] = to_string(ch.mode);
    j["noise_variance_w"] = ch.noise_variance_used;
    if (ch.mode == LinkDirection::downlink) {
        j["h"] = ch.h;
        j["h_dot"] = ch.h_dot;
        j["h_ddot"] = ch.h_ddot;
    } else {
        j["g_prime"] = ch.g_prime;
        j["g_up"] = ch.g_up;
    }
    return j;
}

} // namespace swipt

#endif // SWIPT_IO_HPP
