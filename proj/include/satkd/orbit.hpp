#pragma once

#include <optional>
#include <string>
#include <vector>

namespace satkd::orbit {

// One satellite + two equatorial ground stations. Distances in km, angles in
// degrees at this boundary, times in seconds. Window defaults: 10 h night,
// 14 h day.
struct GeoScenario {
    double altitude_km = 500.0;
    double ground_distance_km = 600.0;
    double elevation_threshold_deg = 20.0;
    double earth_radius_km = 6371.0;
    double gravitational_parameter_km3s2 = 398600.4418;
    double sidereal_day_s = 86164.1;
    double night_window_s = 36000.0;
    double day_window_s = 50400.0;
    std::optional<double> orbit_period_override_s;

    // Violated invariants as bare field-name messages; empty when valid.
    std::vector<std::string> violations() const;
    // Throws std::invalid_argument listing every violated invariant.
    void validate() const;
};

struct LinkSample {
    double t_s;          // time since contact start
    double gamma1_rad;   // Earth-central angle satellite -> station 1
    double gamma2_rad;
    double slant1_km;    // line-of-sight distance to station 1
    double slant2_km;
    double elev1_rad;    // elevation of the satellite above station 1's horizon
    double elev2_rad;
};

struct PassGeometry {
    std::vector<LinkSample> samples;  // ordered by t_s
    double duration_s = 0.0;          // contact length
    double step_s = 0.0;
};

struct PassCounts {
    int night = 0;
    int day = 0;
};

// Orbital period from Kepler's third law, unless the scenario pins an
// explicit override.
double orbital_period(const GeoScenario& sc);

// Largest Earth-central angle at which a station still sees the satellite at
// or above the elevation threshold.
double max_central_angle(const GeoScenario& sc);

// Seconds per pass during which both stations see the satellite above the
// threshold. Zero when the stations are too far apart (2*gamma_max <= delta).
double contact_length(const GeoScenario& sc);

// Passes per window: floor(window / period) + 1, one pass anchored at the
// window start.
PassCounts pass_counts(const GeoScenario& sc);

// Line-of-sight distance to a station at Earth-central angle gamma.
double slant_range_km(const GeoScenario& sc, double gamma_rad);

// Elevation above the station's horizon at Earth-central angle gamma
// (pi/2 at gamma = 0).
double elevation_rad(const GeoScenario& sc, double gamma_rad);

// Per-step link geometry across one contact window. The sub-satellite point
// sweeps the joint-visibility arc at the Earth-relative angular rate;
// stations sit at +-delta/2 about the arc midpoint.
// Throws std::domain_error when the contact window is empty.
PassGeometry link_geometry(const GeoScenario& sc, double step_s);

}  // namespace satkd::orbit
