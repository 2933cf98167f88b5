#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "satkd/channel.hpp"
#include "satkd/keyrate.hpp"
#include "satkd/optimize.hpp"
#include "satkd/orbit.hpp"

namespace satkd::scenario {

inline constexpr const char* kVersion = "0.1.0";

// Altitude x distance sweep; period_overrides_s aligns with altitudes_km
// (empty = Kepler periods everywhere).
struct MatrixSpec {
    std::vector<double> altitudes_km = {500.0, 800.0, 1000.0};
    std::vector<double> distances_km = {600.0, 1200.0, 1800.0};
    std::vector<double> period_overrides_s = {5647.0, 6022.0, 6276.0};
};

struct ExperimentConfig {
    orbit::GeoScenario geo;
    channel::OpticalParams optics;
    channel::TimeProfile night{channel::DayPhase::night, 3e-6, 0.5};
    channel::TimeProfile day{channel::DayPhase::day, 3e-3, 0.5};
    double source_rate_hz = 1e9;
    keyrate::SecurityParams security;
    optimize::SearchGrid grid;
    std::vector<int> days_list = {1, 20, 40, 60, 80};
    bool two_photon_enabled = true;
    bool sifting_enabled = false;
    channel::McConfig mc;
    MatrixSpec matrix;
    double link_step_s = 1.0;
    std::string output_dir = "out";
    unsigned threads = 0;  // 0 = hardware concurrency

    // Throws std::invalid_argument listing every violated invariant.
    void validate() const;

    // Period override for an altitude: the matrix mapping when it lists this
    // altitude, otherwise the scenario-level override.
    std::optional<double> period_override_for(double altitude_km) const;

    optimize::Inputs inputs_for(const orbit::GeoScenario& geo_cell) const;
};

// Paper-default configuration; equals parsing an empty JSON object.
ExperimentConfig default_config();

// Strict parse: unknown keys are errors, missing keys take defaults, every
// violated invariant is reported.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

// One optimizer outcome for one (scenario cell, scheme, k).
struct ResultRecord {
    double altitude_km = 0.0;
    double distance_km = 0.0;
    double contact_length_s = 0.0;
    std::string scheme;
    int k_days = 0;
    double pump_night = 0.0;
    double pump_day = 0.0;
    double sampling_night = 0.0;
    double sampling_day = 0.0;
    double pairs_night = 0.0;
    double pairs_day = 0.0;
    double qber_night = 0.0;
    double qber_day = 0.0;
    double secret_bits = 0.0;
    double effective_rate = 0.0;
    double asymptotic_rate = 0.0;
    std::optional<double> relative_diff;  // blockwise vs non-blockwise, per k
};

// Runs compare_schemes over the full matrix. Record order is fixed:
// scenario-major, then scheme, then k.
std::vector<ResultRecord> compute_matrix(const ExperimentConfig& cfg);

std::string to_csv(const std::vector<ResultRecord>& records);
nlohmann::json records_to_json(const std::vector<ResultRecord>& records);

// compute_matrix + results.csv / results.json / meta.json under out_dir.
std::vector<ResultRecord> run_paper_matrix(const ExperimentConfig& cfg,
                                           const std::string& out_dir);

}  // namespace satkd::scenario
