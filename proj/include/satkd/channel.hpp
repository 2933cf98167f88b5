#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satkd/orbit.hpp"
#include "satkd/source.hpp"

namespace satkd::channel {

enum class DayPhase { night, day };

const char* to_string(DayPhase phase);

struct OpticalParams {
    double wavelength_nm = 810.0;
    double beam_waist_m = 0.15;       // transmitter waist radius w0
    double receiver_radius_m = 0.5;   // telescope aperture radius
    double detector_efficiency = 0.7;

    std::vector<std::string> violations() const;
    void validate() const;
};

struct TimeProfile {
    DayPhase label = DayPhase::night;
    double dark_click_prob = 3e-6;      // per detector per attempt
    double zenith_transmittance = 0.5;  // clear-sky, straight up

    std::vector<std::string> violations() const;
    void validate() const;
};

// Herald statistics of one link configuration, per source attempt.
struct ChannelPoint {
    double p_succ = 0.0;    // both stations register exactly one click
    double fidelity = 1.0;  // in [1/4, 1]
    double qber = 0.0;      // (1 - fidelity) / 2
};

struct McConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
};

struct McEstimate {
    ChannelPoint value;
    ChannelPoint se;  // standard errors of the three estimates
    std::uint64_t successes = 0;
};

// Delivered pairs, attempted signals and pair-weighted QBER for one pass.
struct BlockContribution {
    double pairs_B = 0.0;
    double signals_N = 0.0;
    double qber_Q = 0.0;
};

// End-to-end photon transmission probability for one downlink:
// detector efficiency x Gaussian-beam aperture collection x airmass-scaled
// atmospheric transmittance.
double transmittance(double slant_km, double elevation_rad,
                     const OpticalParams& optics, const TimeProfile& profile);

// Closed-form herald statistics of the detection model: threshold detectors
// on two rails per station, independent dark clicks, a station heralds on
// exactly one click, the attempt succeeds when both stations herald. A
// success is counted at full fidelity only when the Bell pair itself
// produced both clicks; every other herald contributes 1/4.
ChannelPoint herald_stats(const source::EmissionDistribution& emission,
                          double eta1, double eta2, double dark);

// Trial-by-trial simulation of the same detection model. Deterministic for a
// fixed (seed, trials) regardless of thread count.
McEstimate mc_herald_stats(const source::EmissionDistribution& emission,
                           double eta1, double eta2, double dark,
                           const McConfig& cfg, unsigned threads = 0);

// Sweeps the pass geometry, evaluating herald_stats per sample.
// B = rate * sum p_succ * step, N = rate * duration, Q = pair-weighted mean.
BlockContribution pass_aggregate(const orbit::PassGeometry& geometry,
                                 const source::SourceParams& source_params,
                                 const OpticalParams& optics,
                                 const TimeProfile& profile,
                                 double source_rate_hz);

}  // namespace satkd::channel
