#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "satkd/channel.hpp"
#include "satkd/keyrate.hpp"
#include "satkd/orbit.hpp"

namespace satkd::optimize {

// Exhaustive search grid. The pump axis is log-spaced with an optional
// leading zero; the sampling axis is the one-day range scaled by 1/k_days.
struct SearchGrid {
    double pump_min = 1e-3;
    double pump_max = 0.1;
    int pump_count = 100;  // log-spaced points, excluding the zero entry
    bool include_zero_pump = true;
    double sampling_min = 5e-4;  // one-day bounds
    double sampling_max = 3e-1;
    int sampling_count = 30;

    std::vector<double> pump_values() const;
    std::vector<double> sampling_rates(int k_days) const;
    std::vector<std::string> violations() const;
    void validate() const;
};

// Everything the optimizers need to evaluate one scenario.
struct Inputs {
    orbit::GeoScenario geo;
    unsigned threads = 0;  // workers for grid evaluation, 0 = auto
    channel::OpticalParams optics;
    channel::TimeProfile night;
    channel::TimeProfile day;
    double source_rate_hz = 1e9;
    keyrate::SecurityParams security;
    bool two_photon_enabled = true;
    bool sifting_enabled = false;  // halve delivered pairs for basis sifting
    double link_step_s = 1.0;
};

struct OptimizationResult {
    std::map<std::string, double> per_block_pump;
    std::map<std::string, double> per_block_sampling;
    keyrate::KeyResult key;
    std::uint64_t evaluations = 0;
    // Block statistics at the optimum, sample_m filled in.
    std::vector<keyrate::BlockStats> blocks;
};

// Scales one pass up to k days of repeated passes. QBER is unchanged: the
// channel is identical across passes and days.
std::pair<keyrate::BlockStats, keyrate::BlockStats> accumulate_days(
    const channel::BlockContribution& night,
    const channel::BlockContribution& day, const orbit::GeoScenario& geo,
    int k_days);

// Per-block exhaustive (pump, sampling) search; the clamped objective is
// separable so each block is optimized independently. Ties break toward
// lower pump, then lower sampling rate.
OptimizationResult optimize_blockwise(const Inputs& in, const SearchGrid& grid,
                                      int k_days);

// Exhaustive (pump_night, pump_day, sampling) search over the pooled key.
OptimizationResult optimize_nonblockwise(const Inputs& in,
                                         const SearchGrid& grid, int k_days);

struct ComparisonRow {
    int k_days = 0;
    OptimizationResult block;
    OptimizationResult nonblock;
    double rate_block = 0.0;
    double rate_nonblock = 0.0;
    double rate_block_asymptotic = 0.0;     // per signal, at the same pumps
    double rate_nonblock_asymptotic = 0.0;
    std::optional<double> relative_diff;    // empty when rate_nonblock is 0
    double bits_block = 0.0;
    double bits_nonblock = 0.0;
};

// Runs both optimizers for every k in days_list.
std::vector<ComparisonRow> compare_schemes(const Inputs& in,
                                           const SearchGrid& grid,
                                           std::span<const int> days_list);

}  // namespace satkd::optimize
