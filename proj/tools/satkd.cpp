#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "satkd/channel.hpp"
#include "satkd/keyrate.hpp"
#include "satkd/optimize.hpp"
#include "satkd/orbit.hpp"
#include "satkd/scenario.hpp"
#include "satkd/source.hpp"
#include "satkd/util.hpp"

namespace {

using satkd::util::sig9;
namespace scen = satkd::scenario;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitUsage = 2;

scen::ExperimentConfig resolve_config(const std::string& path) {
    if (!path.empty()) return scen::load_config(path);
    return scen::default_config();
}

int cmd_contact(const scen::ExperimentConfig& cfg, double altitude_km,
                double distance_km) {
    satkd::orbit::GeoScenario geo = cfg.geo;
    geo.altitude_km = altitude_km;
    geo.ground_distance_km = distance_km;
    geo.orbit_period_override_s = cfg.period_override_for(altitude_km);
    geo.validate();

    const auto passes = satkd::orbit::pass_counts(geo);
    std::cout << "orbital_period_s,gamma_max_rad,contact_length_s,night_passes,"
                 "day_passes\n"
              << sig9(satkd::orbit::orbital_period(geo)) << ','
              << sig9(satkd::orbit::max_central_angle(geo)) << ','
              << sig9(satkd::orbit::contact_length(geo)) << ',' << passes.night << ','
              << passes.day << '\n';
    return kExitOk;
}

int cmd_sweep(const scen::ExperimentConfig& cfg, const std::string& param,
              int points, const std::string& profile_name) {
    if (param != "pump")
        throw CLI::ValidationError("--param", "only 'pump' is supported");
    const satkd::channel::TimeProfile& profile =
        profile_name == "night" ? cfg.night : cfg.day;

    // Mid-pass sample: both stations at delta/2.
    const double gamma = cfg.geo.ground_distance_km / cfg.geo.earth_radius_km / 2.0;
    const double slant = satkd::orbit::slant_range_km(cfg.geo, gamma);
    const double elev = satkd::orbit::elevation_rad(cfg.geo, gamma);
    const double eta = satkd::channel::transmittance(slant, elev, cfg.optics, profile);

    std::cout << "pump,p_succ,fidelity,qber\n";
    for (double pump :
         satkd::util::log_spaced(cfg.grid.pump_min, cfg.grid.pump_max, points)) {
        satkd::source::SourceParams sp{pump, !cfg.two_photon_enabled};
        const auto pt = satkd::channel::herald_stats(
            satkd::source::emission_distribution(sp), eta, eta,
            profile.dark_click_prob);
        std::cout << sig9(pump) << ',' << sig9(pt.p_succ) << ',' << sig9(pt.fidelity)
                  << ',' << sig9(pt.qber) << '\n';
    }
    return kExitOk;
}

nlohmann::json result_to_json(const satkd::optimize::OptimizationResult& r,
                              int k_days) {
    nlohmann::json j;
    j["scheme"] = satkd::keyrate::to_string(r.key.scheme);
    j["k_days"] = k_days;
    j["per_block_pump"] = r.per_block_pump;
    j["per_block_sampling"] = r.per_block_sampling;
    j["secret_bits"] = r.key.secret_bits;
    j["effective_rate"] = r.key.effective_rate;
    j["evaluations"] = r.evaluations;
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : r.blocks)
        blocks.push_back({{"label", b.label},
                          {"pairs_B", b.pairs_B},
                          {"qber_Q", b.qber_Q},
                          {"signals_N", b.signals_N},
                          {"sample_m", b.sample_m}});
    j["blocks"] = blocks;
    return j;
}

int cmd_optimize(const scen::ExperimentConfig& cfg, const std::string& scheme,
                 int k_days) {
    const auto in = cfg.inputs_for(cfg.geo);
    const auto result = scheme == "blockwise"
                            ? satkd::optimize::optimize_blockwise(in, cfg.grid, k_days)
                            : satkd::optimize::optimize_nonblockwise(in, cfg.grid, k_days);
    std::cout << result_to_json(result, k_days).dump(2) << '\n';
    return kExitOk;
}

int cmd_compare(const scen::ExperimentConfig& cfg, const std::vector<int>& days) {
    const auto rows =
        satkd::optimize::compare_schemes(cfg.inputs_for(cfg.geo), cfg.grid, days);
    std::cout << "k_days,rate_block,rate_nonblock,rate_block_asymptotic,"
                 "rate_nonblock_asymptotic,relative_diff,bits_block,bits_nonblock\n";
    for (const auto& r : rows) {
        std::cout << r.k_days << ',' << sig9(r.rate_block) << ','
                  << sig9(r.rate_nonblock) << ',' << sig9(r.rate_block_asymptotic)
                  << ',' << sig9(r.rate_nonblock_asymptotic) << ','
                  << (r.relative_diff ? sig9(*r.relative_diff) : "") << ','
                  << sig9(r.bits_block) << ',' << sig9(r.bits_nonblock) << '\n';
    }
    return kExitOk;
}

int cmd_matrix(const scen::ExperimentConfig& cfg, const std::string& out_dir) {
    const auto records = scen::run_paper_matrix(cfg, out_dir);
    std::cerr << "wrote " << records.size() << " records to " << out_dir << '\n';
    return kExitOk;
}

int cmd_mc_validate(const scen::ExperimentConfig& cfg, std::uint64_t trials,
                    std::uint64_t seed) {
    const double pumps[] = {0.01, 0.05, 0.1};
    const double etas[] = {1e-4, 1e-3, 1e-2};
    const double darks[] = {3e-6, 3e-3};
    const satkd::channel::McConfig mc{trials, seed};

    bool all_ok = true;
    std::cout << "pump,eta,dark,psucc_analytic,psucc_mc,psucc_se,fid_analytic,fid_mc,"
                 "fid_se,successes,max_z,ok\n";
    for (double pump : pumps) {
        const auto emission =
            satkd::source::emission_distribution({pump, !cfg.two_photon_enabled});
        for (double eta : etas) {
            for (double dark : darks) {
                const auto analytic =
                    satkd::channel::herald_stats(emission, eta, eta, dark);
                const auto mc_est = satkd::channel::mc_herald_stats(
                    emission, eta, eta, dark, mc, cfg.threads);
                // Binomial SE from the analytic rate covers cells with few or
                // zero observed successes.
                const double se_p = std::max(
                    mc_est.se.p_succ,
                    std::sqrt(analytic.p_succ * (1.0 - analytic.p_succ) /
                              static_cast<double>(trials)));
                double max_z = se_p > 0.0
                                   ? std::abs(mc_est.value.p_succ - analytic.p_succ) / se_p
                                   : 0.0;
                if (mc_est.successes >= 2 && mc_est.se.fidelity > 0.0) {
                    max_z = std::max(max_z,
                                     std::abs(mc_est.value.fidelity - analytic.fidelity) /
                                         mc_est.se.fidelity);
                    max_z = std::max(max_z, std::abs(mc_est.value.qber - analytic.qber) /
                                                mc_est.se.qber);
                }
                const bool ok = max_z <= 3.0;
                all_ok = all_ok && ok;
                std::cout << sig9(pump) << ',' << sig9(eta) << ',' << sig9(dark) << ','
                          << sig9(analytic.p_succ) << ',' << sig9(mc_est.value.p_succ)
                          << ',' << sig9(se_p) << ',' << sig9(analytic.fidelity) << ','
                          << sig9(mc_est.value.fidelity) << ','
                          << sig9(mc_est.se.fidelity) << ',' << mc_est.successes << ','
                          << sig9(max_z) << ',' << (ok ? 1 : 0) << '\n';
            }
        }
    }
    return all_ok ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Satellite entanglement-QKD key-rate simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --config/--threads after the subcommand too

    std::string config_path;
    app.add_option("--config", config_path, "JSON configuration file")
        ->envname("SATKD_CONFIG");
    std::optional<unsigned> threads_flag;
    app.add_option("--threads", threads_flag, "worker thread cap (0 = auto)");

    auto* contact = app.add_subcommand("contact", "orbit contact geometry");
    double altitude_km = 0.0, distance_km = 0.0;
    contact->add_option("--altitude-km", altitude_km, "satellite altitude (km)")
        ->required()
        ->check(CLI::PositiveNumber);
    contact->add_option("--distance-km", distance_km, "ground station distance (km)")
        ->required()
        ->check(CLI::NonNegativeNumber);

    auto* sweep = app.add_subcommand("sweep", "channel response vs pump power");
    std::string sweep_param = "pump";
    int sweep_points = 100;
    std::string sweep_profile = "night";
    sweep->add_option("--param", sweep_param, "swept parameter (pump)");
    sweep->add_option("--points", sweep_points, "grid points")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--profile", sweep_profile, "night or day")
        ->check(CLI::IsMember({"night", "day"}));

    auto* optimize = app.add_subcommand("optimize", "grid-search one scheme");
    std::string opt_scheme = "blockwise";
    int opt_days = 1;
    optimize->add_option("--scheme", opt_scheme, "blockwise or nonblockwise")
        ->check(CLI::IsMember({"blockwise", "nonblockwise"}));
    optimize->add_option("--days", opt_days, "accumulation days")
        ->check(CLI::PositiveNumber);

    auto* compare = app.add_subcommand("compare", "blockwise vs non-blockwise table");
    std::vector<int> compare_days = {1, 20, 40, 60, 80};
    compare->add_option("--days", compare_days, "comma-separated day counts")
        ->delimiter(',');

    auto* matrix = app.add_subcommand("matrix", "full altitude x distance sweep");
    std::string out_dir;
    matrix->add_option("--out", out_dir, "output directory");

    auto* mcv = app.add_subcommand("mc-validate", "analytic vs Monte Carlo check");
    std::optional<std::uint64_t> mc_trials;
    std::optional<std::uint64_t> mc_seed;
    mcv->add_option("--trials", mc_trials, "trials per grid point");
    mcv->add_option("--seed", mc_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        scen::ExperimentConfig cfg = resolve_config(config_path);
        if (threads_flag) cfg.threads = *threads_flag;
        cfg.validate();

        if (contact->parsed()) return cmd_contact(cfg, altitude_km, distance_km);
        if (sweep->parsed()) return cmd_sweep(cfg, sweep_param, sweep_points, sweep_profile);
        if (optimize->parsed()) return cmd_optimize(cfg, opt_scheme, opt_days);
        if (compare->parsed()) return cmd_compare(cfg, compare_days);
        if (matrix->parsed())
            return cmd_matrix(cfg, out_dir.empty() ? cfg.output_dir : out_dir);
        if (mcv->parsed())
            return cmd_mc_validate(cfg, mc_trials.value_or(cfg.mc.trials),
                                   mc_seed.value_or(cfg.mc.seed));
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
