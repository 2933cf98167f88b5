#include "satkd/orbit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace satkd::orbit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Earth-relative angular rate of the prograde equatorial satellite.
double relative_rate(const GeoScenario& sc) {
    return kTwoPi / orbital_period(sc) - kTwoPi / sc.sidereal_day_s;
}

}  // namespace

std::vector<std::string> GeoScenario::violations() const {
    std::vector<std::string> out;
    if (!(altitude_km > 0.0)) out.push_back("altitude_km must be > 0");
    if (!(ground_distance_km >= 0.0)) out.push_back("ground_distance_km must be >= 0");
    if (!(elevation_threshold_deg > 0.0 && elevation_threshold_deg < 90.0))
        out.push_back("elevation_threshold_deg must be in (0, 90)");
    if (!(earth_radius_km > 0.0)) out.push_back("earth_radius_km must be > 0");
    if (!(gravitational_parameter_km3s2 > 0.0))
        out.push_back("gravitational_parameter_km3s2 must be > 0");
    if (!(sidereal_day_s > 0.0)) out.push_back("sidereal_day_s must be > 0");
    if (!(night_window_s > 0.0)) out.push_back("night_window_s must be > 0");
    if (!(day_window_s > 0.0)) out.push_back("day_window_s must be > 0");
    if (orbit_period_override_s && !(*orbit_period_override_s > 0.0))
        out.push_back("orbit_period_override_s must be > 0");
    // The satellite must outrun the ground track or no pass ever completes.
    if (out.empty() && orbital_period(*this) >= sidereal_day_s)
        out.push_back("orbital period must be shorter than the sidereal day");
    return out;
}

void GeoScenario::validate() const {
    const auto errs = violations();
    if (errs.empty()) return;
    std::string joined = "GeoScenario:";
    for (const auto& e : errs) joined += " " + e + ";";
    joined.pop_back();
    throw std::invalid_argument(joined);
}

double orbital_period(const GeoScenario& sc) {
    if (sc.orbit_period_override_s) return *sc.orbit_period_override_s;
    const double r_o = sc.earth_radius_km + sc.altitude_km;
    return kTwoPi * std::sqrt(r_o * r_o * r_o / sc.gravitational_parameter_km3s2);
}

double max_central_angle(const GeoScenario& sc) {
    const double r_o = sc.earth_radius_km + sc.altitude_km;
    const double theta = deg2rad(sc.elevation_threshold_deg);
    return std::acos(sc.earth_radius_km / r_o * std::cos(theta)) - theta;
}

double contact_length(const GeoScenario& sc) {
    const double delta = sc.ground_distance_km / sc.earth_radius_km;
    const double arc = 2.0 * max_central_angle(sc) - delta;
    if (arc <= 0.0) return 0.0;
    return arc / relative_rate(sc);
}

PassCounts pass_counts(const GeoScenario& sc) {
    const double period = orbital_period(sc);
    PassCounts counts;
    counts.night = static_cast<int>(std::floor(sc.night_window_s / period)) + 1;
    counts.day = static_cast<int>(std::floor(sc.day_window_s / period)) + 1;
    return counts;
}

double slant_range_km(const GeoScenario& sc, double gamma_rad) {
    const double r_e = sc.earth_radius_km;
    const double r_o = r_e + sc.altitude_km;
    return std::sqrt(r_e * r_e + r_o * r_o - 2.0 * r_e * r_o * std::cos(gamma_rad));
}

double elevation_rad(const GeoScenario& sc, double gamma_rad) {
    const double r_e = sc.earth_radius_km;
    const double r_o = r_e + sc.altitude_km;
    return std::atan2(std::cos(gamma_rad) - r_e / r_o, std::sin(gamma_rad));
}

PassGeometry link_geometry(const GeoScenario& sc, double step_s) {
    if (!(step_s > 0.0)) throw std::invalid_argument("link_geometry: step_s must be > 0");
    const double duration = contact_length(sc);
    if (duration <= 0.0)
        throw std::domain_error("link_geometry: contact window is empty");

    const double delta = sc.ground_distance_km / sc.earth_radius_km;
    const double omega = relative_rate(sc);
    const double half_arc = (2.0 * max_central_angle(sc) - delta) / 2.0;

    PassGeometry pass;
    pass.duration_s = duration;
    pass.step_s = step_s;

    const auto n_steps = static_cast<std::size_t>(std::floor(duration / step_s));
    pass.samples.reserve(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * step_s;
        const double x = -half_arc + omega * t;  // satellite, relative to midpoint
        LinkSample s;
        s.t_s = t;
        s.gamma1_rad = std::abs(x + delta / 2.0);  // station 1 at -delta/2
        s.gamma2_rad = std::abs(x - delta / 2.0);  // station 2 at +delta/2
        s.slant1_km = slant_range_km(sc, s.gamma1_rad);
        s.slant2_km = slant_range_km(sc, s.gamma2_rad);
        s.elev1_rad = elevation_rad(sc, s.gamma1_rad);
        s.elev2_rad = elevation_rad(sc, s.gamma2_rad);
        pass.samples.push_back(s);
    }
    return pass;
}

}  // namespace satkd::orbit
