#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace satkd::keyrate {

struct SecurityParams {
    double eps_sec = 1e-9;
    double eps_cor = 1e-9;
    // When set, error correction leaks multiplier * n * h(Q) instead of the
    // default n * h(Q + mu).
    std::optional<double> lambda_ec_multiplier;

    std::vector<std::string> violations() const;
    void validate() const;
};

// One post-processing block of raw key. Counts are real-valued; at the pair
// rates involved the sub-bit remainder is irrelevant.
struct BlockStats {
    std::string label;
    double pairs_B = 0.0;    // delivered raw-key bits
    double qber_Q = 0.0;
    double signals_N = 0.0;  // attempted source emissions behind this block
    double sample_m = 0.0;   // bits disclosed for error estimation
};

enum class Scheme { nonblockwise, blockwise, asymptotic_nonblock, asymptotic_block };

const char* to_string(Scheme scheme);

struct KeyResult {
    double secret_bits = 0.0;
    double effective_rate = 0.0;  // secret_bits / attempted signals
    Scheme scheme = Scheme::nonblockwise;
};

// Extended binary entropy: the usual h(x) on [0, 1/2], zero elsewhere.
double entropy_ext(double x);

// Finite-sampling deviation mu = sqrt((n+m)(m+1)/(n m^2) * ln(2/eps_sec)).
double sampling_deviation(double n, double m, const SecurityParams& sec);

// Secret-key length after error correction and privacy amplification on a
// single pool of n raw bits estimated with m samples, clamped at zero:
//   max(0, n(1 - 2h(Q + mu)) - log2(2 / (eps_sec^2 eps_cor))).
double key_len_nonblockwise(double n, double m, double qber,
                            const SecurityParams& sec);

// Sum of per-block clamped key lengths; each block is distilled on its own
// (n_i = B_i - m_i, m_i, Q_i). Blocks that cannot be sampled contribute 0.
double key_len_blockwise(std::span<const BlockStats> blocks,
                         const SecurityParams& sec);

// Pair-count-weighted mean QBER. Throws std::domain_error when no block
// delivered any pairs.
double pooled_qber(std::span<const BlockStats> blocks);

// Asymptotic key per raw bit: max(0, 1 - 2h(Q)).
double asymptotic_rate_nonblock(double qber);

// Asymptotic blockwise key per raw bit: sum_i p_i max(0, 1 - 2h(Q_i)).
// Throws std::invalid_argument on length mismatch.
double asymptotic_rate_block(std::span<const double> weights,
                             std::span<const double> qbers);

// (r_b - r_nb) / r_nb. Throws std::domain_error when r_nb is zero.
double relative_difference(double rate_block, double rate_nonblock);

}  // namespace satkd::keyrate
