#include "satkd/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "satkd/util.hpp"

namespace satkd::optimize {

std::vector<double> SearchGrid::pump_values() const {
    std::vector<double> out;
    if (include_zero_pump) out.push_back(0.0);
    const auto ladder = util::log_spaced(pump_min, pump_max, pump_count);
    out.insert(out.end(), ladder.begin(), ladder.end());
    return out;
}

std::vector<double> SearchGrid::sampling_rates(int k_days) const {
    if (k_days < 1)
        throw std::invalid_argument("SearchGrid: k_days must be >= 1");
    return util::log_spaced(sampling_min / k_days, sampling_max / k_days,
                            sampling_count);
}

std::vector<std::string> SearchGrid::violations() const {
    std::vector<std::string> out;
    if (!(pump_min > 0.0 && pump_min <= pump_max))
        out.push_back("pump_min/pump_max must satisfy 0 < min <= max");
    if (!(pump_max <= 0.2))
        out.push_back("pump_max must stay within source validity (<= 0.2)");
    if (pump_count < 1) out.push_back("pump_count must be >= 1");
    if (!(sampling_min > 0.0 && sampling_min <= sampling_max && sampling_max < 0.5))
        out.push_back("sampling_min/sampling_max must satisfy 0 < min <= max < 0.5");
    if (sampling_count < 1) out.push_back("sampling_count must be >= 1");
    return out;
}

void SearchGrid::validate() const {
    const auto errs = violations();
    if (errs.empty()) return;
    std::string joined = "SearchGrid:";
    for (const auto& e : errs) joined += " " + e + ";";
    joined.pop_back();
    throw std::invalid_argument(joined);
}

namespace {

keyrate::BlockStats scaled_block(const channel::BlockContribution& c, int n_passes,
                                 int k_days, const char* label) {
    keyrate::BlockStats b;
    b.label = label;
    const double reps = static_cast<double>(n_passes) * k_days;
    b.pairs_B = c.pairs_B * reps;
    b.signals_N = c.signals_N * reps;
    b.qber_Q = c.qber_Q;
    return b;
}

}  // namespace

std::pair<keyrate::BlockStats, keyrate::BlockStats> accumulate_days(
    const channel::BlockContribution& night,
    const channel::BlockContribution& day, const orbit::GeoScenario& geo,
    int k_days) {
    if (k_days < 1) throw std::invalid_argument("accumulate_days: k_days must be >= 1");
    const orbit::PassCounts passes = orbit::pass_counts(geo);
    return {scaled_block(night, passes.night, k_days, "night"),
            scaled_block(day, passes.day, k_days, "day")};
}

namespace {

// One-pass channel outcome per pump value, per time-of-day profile.
struct PumpTables {
    std::vector<double> pumps;
    std::vector<channel::BlockContribution> night;
    std::vector<channel::BlockContribution> day;
};

PumpTables build_tables(const Inputs& in, const SearchGrid& grid) {
    PumpTables tables;
    tables.pumps = grid.pump_values();
    tables.night.resize(tables.pumps.size());
    tables.day.resize(tables.pumps.size());

    const double contact = orbit::contact_length(in.geo);
    if (contact <= 0.0) return tables;  // no visibility, every entry stays zero

    const orbit::PassGeometry geometry = orbit::link_geometry(in.geo, in.link_step_s);
    const double signals = in.source_rate_hz * geometry.duration_s;
    const double yield = in.sifting_enabled ? 0.5 : 1.0;

    util::parallel_for(tables.pumps.size(), in.threads, [&](std::size_t i) {
        const double pump = tables.pumps[i];
        for (auto* side : {&tables.night, &tables.day}) {
            const channel::TimeProfile& profile =
                side == &tables.night ? in.night : in.day;
            channel::BlockContribution c;
            if (pump == 0.0) {
                // Source off: no pairs accepted, attempts still counted.
                c = {0.0, signals, 0.0};
            } else {
                source::SourceParams sp{pump, !in.two_photon_enabled};
                c = channel::pass_aggregate(geometry, sp, in.optics, profile,
                                            in.source_rate_hz);
                c.pairs_B *= yield;
            }
            (*side)[i] = c;
        }
    });
    return tables;
}

double block_bits(const keyrate::BlockStats& block, const keyrate::SecurityParams& sec) {
    return keyrate::key_len_blockwise({&block, 1}, sec);
}

OptimizationResult optimize_blockwise_impl(const Inputs& in,
                                           const PumpTables& tables,
                                           const SearchGrid& grid, int k_days) {
    const auto rates = grid.sampling_rates(k_days);
    const orbit::PassCounts passes = orbit::pass_counts(in.geo);

    OptimizationResult result;
    result.key.scheme = keyrate::Scheme::blockwise;

    double total_signals = 0.0;
    for (int which = 0; which < 2; ++which) {
        const bool is_night = which == 0;
        const auto& side = is_night ? tables.night : tables.day;
        const int n_passes = is_night ? passes.night : passes.day;
        const char* label = is_night ? "night" : "day";

        double best_bits = 0.0;
        std::size_t best_pump = 0;
        std::size_t best_rate = 0;
        keyrate::BlockStats best_block =
            scaled_block(side[0], n_passes, k_days, label);
        best_block.sample_m = rates[0] * best_block.pairs_B;
        for (std::size_t pi = 0; pi < tables.pumps.size(); ++pi) {
            keyrate::BlockStats block = scaled_block(side[pi], n_passes, k_days, label);
            for (std::size_t ri = 0; ri < rates.size(); ++ri) {
                block.sample_m = rates[ri] * block.pairs_B;
                const double bits = block_bits(block, in.security);
                ++result.evaluations;
                // Strict improvement only: earliest (lowest pump, then lowest
                // sampling rate) maximizer wins.
                if (bits > best_bits) {
                    best_bits = bits;
                    best_pump = pi;
                    best_rate = ri;
                    best_block = block;
                }
            }
        }
        result.per_block_pump[label] = tables.pumps[best_pump];
        result.per_block_sampling[label] = rates[best_rate];
        result.key.secret_bits += best_bits;
        total_signals += best_block.signals_N;
        result.blocks.push_back(best_block);
    }
    result.key.effective_rate =
        total_signals > 0.0 ? result.key.secret_bits / total_signals : 0.0;
    return result;
}

OptimizationResult optimize_nonblockwise_impl(const Inputs& in,
                                              const PumpTables& tables,
                                              const SearchGrid& grid, int k_days) {
    const auto rates = grid.sampling_rates(k_days);
    const orbit::PassCounts passes = orbit::pass_counts(in.geo);

    OptimizationResult result;
    result.key.scheme = keyrate::Scheme::nonblockwise;

    double best_bits = 0.0;
    std::size_t best_pn = 0, best_pd = 0, best_rate = 0;
    for (std::size_t pn = 0; pn < tables.pumps.size(); ++pn) {
        const keyrate::BlockStats night =
            scaled_block(tables.night[pn], passes.night, k_days, "night");
        for (std::size_t pd = 0; pd < tables.pumps.size(); ++pd) {
            const keyrate::BlockStats day =
                scaled_block(tables.day[pd], passes.day, k_days, "day");
            const double pairs = night.pairs_B + day.pairs_B;
            const double pooled =
                pairs > 0.0
                    ? (night.pairs_B * night.qber_Q + day.pairs_B * day.qber_Q) / pairs
                    : 0.0;
            for (std::size_t ri = 0; ri < rates.size(); ++ri) {
                ++result.evaluations;
                double bits = 0.0;
                const double m = rates[ri] * pairs;
                const double n = pairs - m;
                if (m >= 1.0 && n >= 1.0)
                    bits = keyrate::key_len_nonblockwise(n, m, pooled, in.security);
                if (bits > best_bits) {
                    best_bits = bits;
                    best_pn = pn;
                    best_pd = pd;
                    best_rate = ri;
                }
            }
        }
    }

    keyrate::BlockStats night =
        scaled_block(tables.night[best_pn], passes.night, k_days, "night");
    keyrate::BlockStats day =
        scaled_block(tables.day[best_pd], passes.day, k_days, "day");
    const double rate = rates[best_rate];
    night.sample_m = rate * night.pairs_B;
    day.sample_m = rate * day.pairs_B;
    result.per_block_pump["night"] = tables.pumps[best_pn];
    result.per_block_pump["day"] = tables.pumps[best_pd];
    result.per_block_sampling["night"] = rate;
    result.per_block_sampling["day"] = rate;
    result.key.secret_bits = best_bits;
    const double signals = night.signals_N + day.signals_N;
    result.key.effective_rate = signals > 0.0 ? best_bits / signals : 0.0;
    result.blocks = {night, day};
    return result;
}

// Asymptotic key per attempted signal at fixed block statistics.
double asymptotic_rate_per_signal(const std::vector<keyrate::BlockStats>& blocks,
                                  bool pooled) {
    double pairs = 0.0;
    double signals = 0.0;
    for (const auto& b : blocks) {
        pairs += b.pairs_B;
        signals += b.signals_N;
    }
    if (!(pairs > 0.0) || !(signals > 0.0)) return 0.0;
    if (pooled) {
        const double q = keyrate::pooled_qber(blocks);
        return pairs / signals * keyrate::asymptotic_rate_nonblock(q);
    }
    std::vector<double> weights, qbers;
    for (const auto& b : blocks) {
        weights.push_back(b.pairs_B / pairs);
        qbers.push_back(b.qber_Q);
    }
    return pairs / signals * keyrate::asymptotic_rate_block(weights, qbers);
}

}  // namespace

OptimizationResult optimize_blockwise(const Inputs& in, const SearchGrid& grid,
                                      int k_days) {
    grid.validate();
    return optimize_blockwise_impl(in, build_tables(in, grid), grid, k_days);
}

OptimizationResult optimize_nonblockwise(const Inputs& in, const SearchGrid& grid,
                                         int k_days) {
    grid.validate();
    return optimize_nonblockwise_impl(in, build_tables(in, grid), grid, k_days);
}

std::vector<ComparisonRow> compare_schemes(const Inputs& in, const SearchGrid& grid,
                                           std::span<const int> days_list) {
    if (days_list.empty())
        throw std::invalid_argument("compare_schemes: days_list must not be empty");
    grid.validate();
    const PumpTables tables = build_tables(in, grid);

    std::vector<ComparisonRow> rows;
    rows.reserve(days_list.size());
    for (int k : days_list) {
        ComparisonRow row;
        row.k_days = k;
        row.block = optimize_blockwise_impl(in, tables, grid, k);
        row.nonblock = optimize_nonblockwise_impl(in, tables, grid, k);
        row.rate_block = row.block.key.effective_rate;
        row.rate_nonblock = row.nonblock.key.effective_rate;
        row.rate_block_asymptotic = asymptotic_rate_per_signal(row.block.blocks, false);
        row.rate_nonblock_asymptotic =
            asymptotic_rate_per_signal(row.nonblock.blocks, true);
        row.bits_block = row.block.key.secret_bits;
        row.bits_nonblock = row.nonblock.key.secret_bits;
        if (row.rate_nonblock != 0.0)
            row.relative_diff =
                keyrate::relative_difference(row.rate_block, row.rate_nonblock);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace satkd::optimize
