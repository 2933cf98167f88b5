#include "satkd/channel.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "satkd/util.hpp"

namespace satkd::channel {

const char* to_string(DayPhase phase) {
    return phase == DayPhase::night ? "night" : "day";
}

namespace {

void throw_joined(const char* type, const std::vector<std::string>& errs) {
    if (errs.empty()) return;
    std::string joined = std::string(type) + ":";
    for (const auto& e : errs) joined += " " + e + ";";
    joined.pop_back();
    throw std::invalid_argument(joined);
}

}  // namespace

std::vector<std::string> OpticalParams::violations() const {
    std::vector<std::string> out;
    if (!(wavelength_nm > 0.0)) out.push_back("wavelength_nm must be > 0");
    if (!(beam_waist_m > 0.0)) out.push_back("beam_waist_m must be > 0");
    if (!(receiver_radius_m > 0.0)) out.push_back("receiver_radius_m must be > 0");
    if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0))
        out.push_back("detector_efficiency must be in (0, 1]");
    return out;
}

void OpticalParams::validate() const { throw_joined("OpticalParams", violations()); }

std::vector<std::string> TimeProfile::violations() const {
    std::vector<std::string> out;
    if (!(dark_click_prob >= 0.0 && dark_click_prob < 0.5))
        out.push_back("dark_click_prob must be in [0, 0.5)");
    if (!(zenith_transmittance > 0.0 && zenith_transmittance <= 1.0))
        out.push_back("zenith_transmittance must be in (0, 1]");
    return out;
}

void TimeProfile::validate() const { throw_joined("TimeProfile", violations()); }

double transmittance(double slant_km, double elevation_rad,
                     const OpticalParams& optics, const TimeProfile& profile) {
    if (!(slant_km > 0.0))
        throw std::invalid_argument("transmittance: slant_km must be > 0");
    if (!(elevation_rad > 0.0 && elevation_rad <= std::numbers::pi / 2.0 + 1e-12))
        throw std::invalid_argument("transmittance: elevation must be in (0, pi/2]");

    const double d_m = slant_km * 1000.0;
    const double w0 = optics.beam_waist_m;
    const double lambda_m = optics.wavelength_nm * 1e-9;
    const double rayleigh = std::numbers::pi * w0 * w0 / lambda_m;
    const double beam = w0 * std::sqrt(1.0 + (d_m / rayleigh) * (d_m / rayleigh));
    const double a = optics.receiver_radius_m;
    const double eta_fs = 1.0 - std::exp(-2.0 * a * a / (beam * beam));
    const double airmass = 1.0 / std::sin(elevation_rad);
    const double eta_atm = std::pow(profile.zenith_transmittance, airmass);
    return optics.detector_efficiency * eta_fs * eta_atm;
}

namespace {

// Herald probability of a station whose photons all sit in one rail
// (k = 0, 1 or 2 photons): the signal detector clicks when any photon
// converts or its dark count fires; the idle detector clicks only on dark.
// Written in hit-probability form so eta = 0 and d = 0 stay exact.
double herald_one_rail(int k, double eta, double d) {
    const double hit = k == 0 ? 0.0 : k == 1 ? eta : eta * (2.0 - eta);
    const double s = hit + (1.0 - hit) * d;
    return s * (1.0 - d) + (1.0 - s) * d;
}

// Herald probability with one photon in each rail: two identically
// distributed detectors, exactly one click.
double herald_both_rails(double eta, double d) {
    const double c = eta + (1.0 - eta) * d;
    return 2.0 * c * (1.0 - c);
}

}  // namespace

ChannelPoint herald_stats(const source::EmissionDistribution& emission,
                          double eta1, double eta2, double dark) {
    const double d = dark;
    const double vac = herald_one_rail(0, 0.0, d);
    const double bell1 = herald_one_rail(1, eta1, d);
    const double bell2 = herald_one_rail(1, eta2, d);
    const double two1 = herald_one_rail(2, eta1, d);
    const double two2 = herald_one_rail(2, eta2, d);
    const double mid1 = herald_both_rails(eta1, d);
    const double mid2 = herald_both_rails(eta2, d);

    // Two-photon placements (2,0;0,2) and (0,2;2,0) have identical herald
    // probability; (1,1;1,1) spreads one photon per rail.
    const double two_photon_succ = (2.0 * two1 * two2 + mid1 * mid2) / 3.0;

    const double p_succ = emission.p_vacuum * vac * vac +
                          emission.p_pair * bell1 * bell2 +
                          emission.p_two_photon * two_photon_succ;
    // Good = Bell emission, both photons detected, no idle-rail dark click.
    const double p_good = emission.p_pair * eta1 * eta2 * (1.0 - d) * (1.0 - d);

    ChannelPoint pt;
    pt.p_succ = p_succ;
    if (p_succ <= 0.0) {
        pt.fidelity = 1.0;
        pt.qber = 0.0;
        return pt;
    }
    pt.fidelity = (p_good + 0.25 * (p_succ - p_good)) / p_succ;
    pt.qber = (1.0 - pt.fidelity) / 2.0;
    return pt;
}

namespace {

// splitmix64; decorrelates per-chunk seeds.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct ChunkTally {
    std::uint64_t successes = 0;
    std::uint64_t good = 0;
};

constexpr std::uint64_t kChunkTrials = 1u << 16;

// One Bernoulli draw; bit-stable across platforms (mt19937_64 output mapped
// to [0,1) directly, no distribution object).
bool bernoulli(std::mt19937_64& rng, double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

ChunkTally run_chunk(const source::EmissionDistribution& emission, double eta1,
                     double eta2, double dark, std::uint64_t trials,
                     std::uint64_t chunk_seed) {
    std::mt19937_64 rng(chunk_seed);
    ChunkTally tally;
    const double p0 = emission.p_vacuum;
    const double p01 = emission.p_vacuum + emission.p_pair;
    for (std::uint64_t t = 0; t < trials; ++t) {
        // photons per detector: [s1_rail_a, s1_rail_b, s2_rail_a, s2_rail_b]
        int photons[4] = {0, 0, 0, 0};
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        int sector = 0;
        if (u < p0) {
            sector = 0;
        } else if (u < p01) {
            sector = 1;
            if (bernoulli(rng, 0.5)) {
                photons[0] = 1;
                photons[3] = 1;
            } else {
                photons[1] = 1;
                photons[2] = 1;
            }
        } else {
            sector = 2;
            const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (v < 1.0 / 3.0) {
                photons[0] = 2;
                photons[3] = 2;
            } else if (v < 2.0 / 3.0) {
                photons[0] = photons[1] = photons[2] = photons[3] = 1;
            } else {
                photons[1] = 2;
                photons[2] = 2;
            }
        }
        bool triggered[4];
        bool darkclick[4];
        for (int i = 0; i < 4; ++i) {
            const double eta = i < 2 ? eta1 : eta2;
            triggered[i] = false;
            for (int k = 0; k < photons[i]; ++k)
                if (bernoulli(rng, eta)) triggered[i] = true;
            darkclick[i] = bernoulli(rng, dark);
        }
        const bool click[4] = {triggered[0] || darkclick[0], triggered[1] || darkclick[1],
                               triggered[2] || darkclick[2], triggered[3] || darkclick[3]};
        const bool herald1 = click[0] != click[1];
        const bool herald2 = click[2] != click[3];
        if (!(herald1 && herald2)) continue;
        ++tally.successes;
        if (sector == 1) {
            const int sig1 = photons[0] == 1 ? 0 : 1;
            const int sig2 = photons[2] == 1 ? 2 : 3;
            const int idle1 = 1 - sig1;
            const int idle2 = 5 - sig2;
            if (triggered[sig1] && triggered[sig2] && !darkclick[idle1] &&
                !darkclick[idle2])
                ++tally.good;
        }
    }
    return tally;
}

}  // namespace

McEstimate mc_herald_stats(const source::EmissionDistribution& emission,
                           double eta1, double eta2, double dark,
                           const McConfig& cfg, unsigned threads) {
    if (cfg.trials < 1)
        throw std::invalid_argument("mc_herald_stats: trials must be >= 1");

    const std::uint64_t n_chunks = (cfg.trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<ChunkTally> tallies(n_chunks);
    util::parallel_for(n_chunks, threads, [&](std::size_t c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunkTrials;
        const std::uint64_t len = std::min<std::uint64_t>(kChunkTrials, cfg.trials - lo);
        tallies[c] = run_chunk(emission, eta1, eta2, dark, len,
                               mix64(cfg.seed ^ mix64(c)));
    });

    std::uint64_t successes = 0;
    std::uint64_t good = 0;
    for (const auto& t : tallies) {
        successes += t.successes;
        good += t.good;
    }

    McEstimate est;
    est.successes = successes;
    const double n = static_cast<double>(cfg.trials);
    const double p = static_cast<double>(successes) / n;
    est.value.p_succ = p;
    est.se.p_succ = std::sqrt(p * (1.0 - p) / n);
    if (successes == 0) {
        est.value.fidelity = 1.0;  // same convention as herald_stats
        est.value.qber = 0.0;
        est.se.fidelity = 0.0;
        est.se.qber = 0.0;
        return est;
    }
    // Each success contributes fidelity 1 (good) or 1/4 (bad).
    const double ns = static_cast<double>(successes);
    const double f = (static_cast<double>(good) + 0.25 * static_cast<double>(successes - good)) / ns;
    const double m2 = (static_cast<double>(good) + 0.0625 * static_cast<double>(successes - good)) / ns;
    est.value.fidelity = f;
    est.value.qber = (1.0 - f) / 2.0;
    est.se.fidelity = std::sqrt(std::max(0.0, m2 - f * f) / ns);
    est.se.qber = est.se.fidelity / 2.0;
    return est;
}

BlockContribution pass_aggregate(const orbit::PassGeometry& geometry,
                                 const source::SourceParams& source_params,
                                 const OpticalParams& optics,
                                 const TimeProfile& profile,
                                 double source_rate_hz) {
    if (geometry.samples.empty())
        throw std::invalid_argument("pass_aggregate: empty pass geometry");
    if (!(source_rate_hz > 0.0))
        throw std::invalid_argument("pass_aggregate: source_rate_hz must be > 0");

    const auto emission = source::emission_distribution(source_params);
    double p_dt = 0.0;   // sum of p_succ * step
    double pq_dt = 0.0;  // sum of p_succ * qber * step
    for (const auto& s : geometry.samples) {
        const double eta1 = transmittance(s.slant1_km, s.elev1_rad, optics, profile);
        const double eta2 = transmittance(s.slant2_km, s.elev2_rad, optics, profile);
        const ChannelPoint pt =
            herald_stats(emission, eta1, eta2, profile.dark_click_prob);
        p_dt += pt.p_succ * geometry.step_s;
        pq_dt += pt.p_succ * pt.qber * geometry.step_s;
    }

    BlockContribution out;
    out.pairs_B = source_rate_hz * p_dt;
    out.signals_N = source_rate_hz * geometry.duration_s;
    out.qber_Q = p_dt > 0.0 ? pq_dt / p_dt : 0.0;
    return out;
}

}  // namespace satkd::channel
