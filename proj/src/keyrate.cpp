#include "satkd/keyrate.hpp"

#include <cmath>
#include <stdexcept>

namespace satkd::keyrate {

std::vector<std::string> SecurityParams::violations() const {
    std::vector<std::string> out;
    if (!(eps_sec > 0.0 && eps_sec < 1.0)) out.push_back("eps_sec must be in (0, 1)");
    if (!(eps_cor > 0.0 && eps_cor < 1.0)) out.push_back("eps_cor must be in (0, 1)");
    if (lambda_ec_multiplier && !(*lambda_ec_multiplier > 0.0))
        out.push_back("lambda_ec_multiplier must be > 0");
    return out;
}

void SecurityParams::validate() const {
    const auto errs = violations();
    if (errs.empty()) return;
    std::string joined = "SecurityParams:";
    for (const auto& e : errs) joined += " " + e + ";";
    joined.pop_back();
    throw std::invalid_argument(joined);
}

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::nonblockwise: return "nonblockwise";
        case Scheme::blockwise: return "blockwise";
        case Scheme::asymptotic_nonblock: return "asymptotic_nonblock";
        case Scheme::asymptotic_block: return "asymptotic_block";
    }
    return "?";
}

double entropy_ext(double x) {
    if (x <= 0.0 || x > 0.5) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double sampling_deviation(double n, double m, const SecurityParams& sec) {
    if (!(n >= 1.0) || !(m >= 1.0))
        throw std::invalid_argument("sampling_deviation: need n >= 1 and m >= 1");
    return std::sqrt((n + m) * (m + 1.0) / (n * m * m) * std::log(2.0 / sec.eps_sec));
}

namespace {

double privacy_log_term(const SecurityParams& sec) {
    return std::log2(2.0 / (sec.eps_sec * sec.eps_sec * sec.eps_cor));
}

}  // namespace

double key_len_nonblockwise(double n, double m, double qber,
                            const SecurityParams& sec) {
    const double mu = sampling_deviation(n, m, sec);
    double len;
    if (sec.lambda_ec_multiplier) {
        len = n * (1.0 - entropy_ext(qber + mu)) -
              *sec.lambda_ec_multiplier * n * entropy_ext(qber) -
              privacy_log_term(sec);
    } else {
        // Default lambda_EC = n h(Q+mu), so the entropy appears twice.
        len = n * (1.0 - 2.0 * entropy_ext(qber + mu)) - privacy_log_term(sec);
    }
    return std::max(0.0, len);
}

double key_len_blockwise(std::span<const BlockStats> blocks,
                         const SecurityParams& sec) {
    double total = 0.0;
    for (const auto& b : blocks) {
        const double n = b.pairs_B - b.sample_m;
        // A block too small to sample and still keep raw bits yields nothing.
        if (b.pairs_B <= 0.0 || b.sample_m < 1.0 || n < 1.0) continue;
        total += key_len_nonblockwise(n, b.sample_m, b.qber_Q, sec);
    }
    return total;
}

double pooled_qber(std::span<const BlockStats> blocks) {
    double pairs = 0.0;
    double weighted = 0.0;
    for (const auto& b : blocks) {
        pairs += b.pairs_B;
        weighted += b.pairs_B * b.qber_Q;
    }
    if (!(pairs > 0.0))
        throw std::domain_error("pooled_qber: no delivered pairs in any block");
    return weighted / pairs;
}

double asymptotic_rate_nonblock(double qber) {
    return std::max(0.0, 1.0 - 2.0 * entropy_ext(qber));
}

double asymptotic_rate_block(std::span<const double> weights,
                             std::span<const double> qbers) {
    if (weights.size() != qbers.size())
        throw std::invalid_argument("asymptotic_rate_block: length mismatch");
    double rate = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        rate += weights[i] * asymptotic_rate_nonblock(qbers[i]);
    return rate;
}

double relative_difference(double rate_block, double rate_nonblock) {
    if (rate_nonblock == 0.0)
        throw std::domain_error("relative_difference: undefined at zero non-blockwise rate");
    return (rate_block - rate_nonblock) / rate_nonblock;
}

}  // namespace satkd::keyrate
