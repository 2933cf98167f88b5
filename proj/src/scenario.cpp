#include "satkd/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "satkd/util.hpp"

namespace satkd::scenario {

using nlohmann::json;

namespace {

std::string joined_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Strict mode: every key in j must be in the allowed list.
void check_keys(const json& j, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known)
            throw std::runtime_error("unknown key: " + joined_path(prefix, item.key()));
    }
}

template <typename T>
void read_field(const json& j, const std::string& prefix, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::runtime_error("config field " + joined_path(prefix, key) + ": " +
                                 e.what());
    }
}

void read_optional(const json& j, const std::string& prefix, const char* key,
                   std::optional<double>& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<double>();
    } catch (const json::exception& e) {
        throw std::runtime_error("config field " + joined_path(prefix, key) + ": " +
                                 e.what());
    }
}

void parse_geo(const json& j, orbit::GeoScenario& geo) {
    check_keys(j, "geo",
               {"altitude_km", "ground_distance_km", "elevation_threshold_deg",
                "earth_radius_km", "gravitational_parameter_km3s2", "sidereal_day_s",
                "night_window_s", "day_window_s", "orbit_period_override_s"});
    read_field(j, "geo", "altitude_km", geo.altitude_km);
    read_field(j, "geo", "ground_distance_km", geo.ground_distance_km);
    read_field(j, "geo", "elevation_threshold_deg", geo.elevation_threshold_deg);
    read_field(j, "geo", "earth_radius_km", geo.earth_radius_km);
    read_field(j, "geo", "gravitational_parameter_km3s2",
               geo.gravitational_parameter_km3s2);
    read_field(j, "geo", "sidereal_day_s", geo.sidereal_day_s);
    read_field(j, "geo", "night_window_s", geo.night_window_s);
    read_field(j, "geo", "day_window_s", geo.day_window_s);
    read_optional(j, "geo", "orbit_period_override_s", geo.orbit_period_override_s);
}

void parse_optics(const json& j, channel::OpticalParams& optics) {
    check_keys(j, "optics",
               {"wavelength_nm", "beam_waist_m", "receiver_radius_m",
                "detector_efficiency"});
    read_field(j, "optics", "wavelength_nm", optics.wavelength_nm);
    read_field(j, "optics", "beam_waist_m", optics.beam_waist_m);
    read_field(j, "optics", "receiver_radius_m", optics.receiver_radius_m);
    read_field(j, "optics", "detector_efficiency", optics.detector_efficiency);
}

void parse_profile(const json& j, const std::string& prefix,
                   channel::TimeProfile& profile) {
    check_keys(j, prefix, {"dark_click_prob", "zenith_transmittance"});
    read_field(j, prefix, "dark_click_prob", profile.dark_click_prob);
    read_field(j, prefix, "zenith_transmittance", profile.zenith_transmittance);
}

void append_prefixed(std::vector<std::string>& all, const std::string& prefix,
                     const std::vector<std::string>& errs) {
    for (const auto& e : errs) all.push_back(prefix + "." + e);
}

}  // namespace

void ExperimentConfig::validate() const {
    std::vector<std::string> errs;
    append_prefixed(errs, "geo", geo.violations());
    append_prefixed(errs, "optics", optics.violations());
    append_prefixed(errs, "night", night.violations());
    append_prefixed(errs, "day", day.violations());
    append_prefixed(errs, "security", security.violations());
    append_prefixed(errs, "grid", grid.violations());
    if (!(source_rate_hz > 0.0)) errs.push_back("source_rate_hz must be > 0");
    if (days_list.empty()) errs.push_back("days_list must not be empty");
    for (int k : days_list)
        if (k < 1) {
            errs.push_back("days_list entries must be >= 1");
            break;
        }
    if (mc.trials < 1) errs.push_back("mc.trials must be >= 1");
    if (!(link_step_s > 0.0)) errs.push_back("link_step_s must be > 0");
    if (matrix.altitudes_km.empty()) errs.push_back("matrix.altitudes_km must not be empty");
    if (matrix.distances_km.empty()) errs.push_back("matrix.distances_km must not be empty");
    for (double a : matrix.altitudes_km)
        if (!(a > 0.0)) {
            errs.push_back("matrix.altitudes_km entries must be > 0");
            break;
        }
    for (double d : matrix.distances_km)
        if (!(d >= 0.0)) {
            errs.push_back("matrix.distances_km entries must be >= 0");
            break;
        }
    if (!matrix.period_overrides_s.empty() &&
        matrix.period_overrides_s.size() != matrix.altitudes_km.size())
        errs.push_back(
            "matrix.period_overrides_s must be empty or align with matrix.altitudes_km");
    for (double p : matrix.period_overrides_s)
        if (!(p > 0.0)) {
            errs.push_back("matrix.period_overrides_s entries must be > 0");
            break;
        }
    if (errs.empty()) return;
    std::string joined = "invalid config:";
    for (const auto& e : errs) joined += " " + e + ";";
    joined.pop_back();
    throw std::invalid_argument(joined);
}

std::optional<double> ExperimentConfig::period_override_for(double altitude_km) const {
    if (!matrix.period_overrides_s.empty()) {
        for (std::size_t i = 0; i < matrix.altitudes_km.size(); ++i)
            if (std::abs(matrix.altitudes_km[i] - altitude_km) < 1e-9)
                return matrix.period_overrides_s[i];
    }
    return geo.orbit_period_override_s;
}

optimize::Inputs ExperimentConfig::inputs_for(const orbit::GeoScenario& geo_cell) const {
    optimize::Inputs in;
    in.geo = geo_cell;
    in.threads = threads;
    in.optics = optics;
    in.night = night;
    in.day = day;
    in.source_rate_hz = source_rate_hz;
    in.security = security;
    in.two_photon_enabled = two_photon_enabled;
    in.sifting_enabled = sifting_enabled;
    in.link_step_s = link_step_s;
    return in;
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object())
        throw std::runtime_error("config root must be a JSON object");
    check_keys(j, "",
               {"geo", "optics", "night", "day", "source_rate_hz", "security", "grid",
                "days_list", "two_photon_enabled", "sifting_enabled", "mc", "matrix",
                "link_step_s", "output_dir", "threads"});

    ExperimentConfig cfg;
    if (j.contains("geo")) parse_geo(j.at("geo"), cfg.geo);
    if (j.contains("optics")) parse_optics(j.at("optics"), cfg.optics);
    if (j.contains("night")) parse_profile(j.at("night"), "night", cfg.night);
    if (j.contains("day")) parse_profile(j.at("day"), "day", cfg.day);
    read_field(j, "", "source_rate_hz", cfg.source_rate_hz);
    if (j.contains("security")) {
        const auto& s = j.at("security");
        check_keys(s, "security", {"eps_sec", "eps_cor", "lambda_ec_multiplier"});
        read_field(s, "security", "eps_sec", cfg.security.eps_sec);
        read_field(s, "security", "eps_cor", cfg.security.eps_cor);
        read_optional(s, "security", "lambda_ec_multiplier",
                      cfg.security.lambda_ec_multiplier);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        check_keys(g, "grid",
                   {"pump_min", "pump_max", "pump_count", "include_zero_pump",
                    "sampling_min", "sampling_max", "sampling_count"});
        read_field(g, "grid", "pump_min", cfg.grid.pump_min);
        read_field(g, "grid", "pump_max", cfg.grid.pump_max);
        read_field(g, "grid", "pump_count", cfg.grid.pump_count);
        read_field(g, "grid", "include_zero_pump", cfg.grid.include_zero_pump);
        read_field(g, "grid", "sampling_min", cfg.grid.sampling_min);
        read_field(g, "grid", "sampling_max", cfg.grid.sampling_max);
        read_field(g, "grid", "sampling_count", cfg.grid.sampling_count);
    }
    read_field(j, "", "days_list", cfg.days_list);
    read_field(j, "", "two_photon_enabled", cfg.two_photon_enabled);
    read_field(j, "", "sifting_enabled", cfg.sifting_enabled);
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        check_keys(m, "mc", {"trials", "seed"});
        read_field(m, "mc", "trials", cfg.mc.trials);
        read_field(m, "mc", "seed", cfg.mc.seed);
    }
    if (j.contains("matrix")) {
        const auto& m = j.at("matrix");
        check_keys(m, "matrix", {"altitudes_km", "distances_km", "period_overrides_s"});
        read_field(m, "matrix", "altitudes_km", cfg.matrix.altitudes_km);
        read_field(m, "matrix", "distances_km", cfg.matrix.distances_km);
        read_field(m, "matrix", "period_overrides_s", cfg.matrix.period_overrides_s);
    }
    read_field(j, "", "link_step_s", cfg.link_step_s);
    read_field(j, "", "output_dir", cfg.output_dir);
    read_field(j, "", "threads", cfg.threads);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["geo"] = {
        {"altitude_km", cfg.geo.altitude_km},
        {"ground_distance_km", cfg.geo.ground_distance_km},
        {"elevation_threshold_deg", cfg.geo.elevation_threshold_deg},
        {"earth_radius_km", cfg.geo.earth_radius_km},
        {"gravitational_parameter_km3s2", cfg.geo.gravitational_parameter_km3s2},
        {"sidereal_day_s", cfg.geo.sidereal_day_s},
        {"night_window_s", cfg.geo.night_window_s},
        {"day_window_s", cfg.geo.day_window_s},
    };
    if (cfg.geo.orbit_period_override_s)
        j["geo"]["orbit_period_override_s"] = *cfg.geo.orbit_period_override_s;
    j["optics"] = {
        {"wavelength_nm", cfg.optics.wavelength_nm},
        {"beam_waist_m", cfg.optics.beam_waist_m},
        {"receiver_radius_m", cfg.optics.receiver_radius_m},
        {"detector_efficiency", cfg.optics.detector_efficiency},
    };
    j["night"] = {{"dark_click_prob", cfg.night.dark_click_prob},
                  {"zenith_transmittance", cfg.night.zenith_transmittance}};
    j["day"] = {{"dark_click_prob", cfg.day.dark_click_prob},
                {"zenith_transmittance", cfg.day.zenith_transmittance}};
    j["source_rate_hz"] = cfg.source_rate_hz;
    j["security"] = {{"eps_sec", cfg.security.eps_sec},
                     {"eps_cor", cfg.security.eps_cor}};
    if (cfg.security.lambda_ec_multiplier)
        j["security"]["lambda_ec_multiplier"] = *cfg.security.lambda_ec_multiplier;
    j["grid"] = {
        {"pump_min", cfg.grid.pump_min},
        {"pump_max", cfg.grid.pump_max},
        {"pump_count", cfg.grid.pump_count},
        {"include_zero_pump", cfg.grid.include_zero_pump},
        {"sampling_min", cfg.grid.sampling_min},
        {"sampling_max", cfg.grid.sampling_max},
        {"sampling_count", cfg.grid.sampling_count},
    };
    j["days_list"] = cfg.days_list;
    j["two_photon_enabled"] = cfg.two_photon_enabled;
    j["sifting_enabled"] = cfg.sifting_enabled;
    j["mc"] = {{"trials", cfg.mc.trials}, {"seed", cfg.mc.seed}};
    j["matrix"] = {{"altitudes_km", cfg.matrix.altitudes_km},
                   {"distances_km", cfg.matrix.distances_km},
                   {"period_overrides_s", cfg.matrix.period_overrides_s}};
    j["link_step_s"] = cfg.link_step_s;
    j["output_dir"] = cfg.output_dir;
    j["threads"] = cfg.threads;
    return j;
}

namespace {

ResultRecord make_record(const orbit::GeoScenario& geo_cell,
                         const optimize::ComparisonRow& row, bool blockwise) {
    const auto& opt = blockwise ? row.block : row.nonblock;
    ResultRecord r;
    r.altitude_km = geo_cell.altitude_km;
    r.distance_km = geo_cell.ground_distance_km;
    r.contact_length_s = orbit::contact_length(geo_cell);
    r.scheme = blockwise ? "blockwise" : "nonblockwise";
    r.k_days = row.k_days;
    r.pump_night = opt.per_block_pump.at("night");
    r.pump_day = opt.per_block_pump.at("day");
    r.sampling_night = opt.per_block_sampling.at("night");
    r.sampling_day = opt.per_block_sampling.at("day");
    for (const auto& b : opt.blocks) {
        if (b.label == "night") {
            r.pairs_night = b.pairs_B;
            r.qber_night = b.qber_Q;
        } else {
            r.pairs_day = b.pairs_B;
            r.qber_day = b.qber_Q;
        }
    }
    r.secret_bits = opt.key.secret_bits;
    r.effective_rate = opt.key.effective_rate;
    r.asymptotic_rate =
        blockwise ? row.rate_block_asymptotic : row.rate_nonblock_asymptotic;
    r.relative_diff = row.relative_diff;
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::vector<ResultRecord> compute_matrix(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ResultRecord> records;
    for (double alt : cfg.matrix.altitudes_km) {
        for (double dist : cfg.matrix.distances_km) {
            orbit::GeoScenario geo_cell = cfg.geo;
            geo_cell.altitude_km = alt;
            geo_cell.ground_distance_km = dist;
            geo_cell.orbit_period_override_s = cfg.period_override_for(alt);
            geo_cell.validate();
            const auto rows = optimize::compare_schemes(
                cfg.inputs_for(geo_cell), cfg.grid, cfg.days_list);
            for (const auto& row : rows) records.push_back(make_record(geo_cell, row, true));
            for (const auto& row : rows) records.push_back(make_record(geo_cell, row, false));
        }
    }
    return records;
}

std::string to_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    out << "altitude_km,distance_km,contact_length_s,scheme,k_days,pump_night,"
           "pump_day,sampling_night,sampling_day,pairs_night,pairs_day,qber_night,"
           "qber_day,secret_bits,effective_rate,asymptotic_rate,relative_diff\n";
    using util::sig9;
    for (const auto& r : records) {
        out << sig9(r.altitude_km) << ',' << sig9(r.distance_km) << ','
            << sig9(r.contact_length_s) << ',' << r.scheme << ',' << r.k_days << ','
            << sig9(r.pump_night) << ',' << sig9(r.pump_day) << ','
            << sig9(r.sampling_night) << ',' << sig9(r.sampling_day) << ','
            << sig9(r.pairs_night) << ',' << sig9(r.pairs_day) << ','
            << sig9(r.qber_night) << ',' << sig9(r.qber_day) << ','
            << sig9(r.secret_bits) << ',' << sig9(r.effective_rate) << ','
            << sig9(r.asymptotic_rate) << ','
            << (r.relative_diff ? sig9(*r.relative_diff) : "") << '\n';
    }
    return out.str();
}

json records_to_json(const std::vector<ResultRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) {
        json o;
        o["altitude_km"] = r.altitude_km;
        o["distance_km"] = r.distance_km;
        o["contact_length_s"] = r.contact_length_s;
        o["scheme"] = r.scheme;
        o["k_days"] = r.k_days;
        o["pump_night"] = r.pump_night;
        o["pump_day"] = r.pump_day;
        o["sampling_night"] = r.sampling_night;
        o["sampling_day"] = r.sampling_day;
        o["pairs_night"] = r.pairs_night;
        o["pairs_day"] = r.pairs_day;
        o["qber_night"] = r.qber_night;
        o["qber_day"] = r.qber_day;
        o["secret_bits"] = r.secret_bits;
        o["effective_rate"] = r.effective_rate;
        o["asymptotic_rate"] = r.asymptotic_rate;
        if (r.relative_diff)
            o["relative_diff"] = *r.relative_diff;
        else
            o["relative_diff"] = nullptr;
        arr.push_back(std::move(o));
    }
    return arr;
}

std::vector<ResultRecord> run_paper_matrix(const ExperimentConfig& cfg,
                                           const std::string& out_dir) {
    const auto records = compute_matrix(cfg);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                                 ec.message());
    write_file(out_dir + "/results.csv", to_csv(records));
    write_file(out_dir + "/results.json", records_to_json(records).dump(2) + "\n");
    json meta;
    meta["config"] = to_json(cfg);
    meta["version"] = kVersion;
    meta["seed"] = cfg.mc.seed;
    write_file(out_dir + "/meta.json", meta.dump(2) + "\n");
    return records;
}

}  // namespace satkd::scenario
