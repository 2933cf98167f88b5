#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "satkd/keyrate.hpp"

using namespace satkd;

namespace {

const keyrate::SecurityParams kSec{};  // 1e-9 / 1e-9

keyrate::BlockStats block(double B, double Q, double m, const char* label = "b") {
    keyrate::BlockStats b;
    b.label = label;
    b.pairs_B = B;
    b.qber_Q = Q;
    b.sample_m = m;
    b.signals_N = B;
    return b;
}

}  // namespace

TEST_CASE("extended binary entropy") {
    CHECK(keyrate::entropy_ext(0.0) == 0.0);
    CHECK(keyrate::entropy_ext(-0.3) == 0.0);
    CHECK(keyrate::entropy_ext(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(keyrate::entropy_ext(0.51) == 0.0);
    CHECK(keyrate::entropy_ext(1.2) == 0.0);
    // Near the 11% threshold 1 - 2h crosses zero.
    CHECK(keyrate::entropy_ext(0.11) == doctest::Approx(0.4999160).epsilon(1e-6));
    CHECK(1.0 - 2.0 * keyrate::entropy_ext(0.11) ==
          doctest::Approx(1.680837e-4).epsilon(1e-5));
}

TEST_CASE("sampling deviation") {
    const double mu = keyrate::sampling_deviation(1e6, 1e6, kSec);
    CHECK(mu == doctest::Approx(6.545e-3).epsilon(1.6e-4));  // +-1e-6 absolute
    CHECK(std::abs(mu - 6.545e-3) < 1e-6);
    CHECK(mu == doctest::Approx(6.5446824879e-3).epsilon(1e-9));

    // Strictly decreasing in the sample count at fixed n.
    double prev = keyrate::sampling_deviation(1e6, 10, kSec);
    for (double m = 100; m <= 1e9; m *= 10) {
        const double cur = keyrate::sampling_deviation(1e6, m, kSec);
        CHECK(cur < prev);
        prev = cur;
    }

    // Doubling ln(2/eps) scales mu by sqrt(2): eps' = eps^2 / 2.
    keyrate::SecurityParams tighter = kSec;
    tighter.eps_sec = kSec.eps_sec * kSec.eps_sec / 2.0;
    CHECK(keyrate::sampling_deviation(1e6, 1e6, tighter) / mu ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(keyrate::sampling_deviation(0.5, 1e6, kSec),
                    std::invalid_argument);
    CHECK_THROWS_AS(keyrate::sampling_deviation(1e6, 0.0, kSec),
                    std::invalid_argument);
}

TEST_CASE("non-blockwise key length") {
    // Frozen from the extended-precision oracle: 1e6 (1 - 2h(mu)) - 90.692.
    const double len = keyrate::key_len_nonblockwise(1e6, 1e6, 0.0, kSec);
    const double expected = static_cast<double>(
        oracle::key_len_nonblockwise(1e6L, 1e6L, 0.0L, 1e-9L, 1e-9L));
    CHECK(len == doctest::Approx(expected).epsilon(1e-9));
    CHECK(len == doctest::Approx(886117.9).epsilon(1e-6));

    // Clamp: Q + mu just under 1/2, entropy near 1, expression negative.
    CHECK(keyrate::key_len_nonblockwise(1e4, 1e4, 0.43, kSec) == 0.0);
    // Tiny pools never clear the privacy-amplification log term.
    CHECK(keyrate::key_len_nonblockwise(50, 50, 0.3, kSec) == 0.0);
    // Beyond 1/2 the extended entropy zeroes out and n dominates again; this
    // regime is outside any distillation the optimizers visit.
    CHECK(keyrate::key_len_nonblockwise(1e4, 100, 0.45, kSec) ==
          doctest::Approx(1e4 - 90.692).epsilon(1e-4));

    // Monotone: worse QBER never helps, more raw bits never hurt.
    double prev = keyrate::key_len_nonblockwise(1e6, 1e5, 0.0, kSec);
    for (double q = 0.01; q <= 0.2; q += 0.01) {
        const double cur = keyrate::key_len_nonblockwise(1e6, 1e5, q, kSec);
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK(keyrate::key_len_nonblockwise(2e6, 1e5, 0.02, kSec) >=
          keyrate::key_len_nonblockwise(1e6, 1e5, 0.02, kSec));
}

TEST_CASE("error-correction leakage multiplier") {
    keyrate::SecurityParams sec;
    sec.lambda_ec_multiplier = 1.2;
    const double n = 1e6, m = 1e5, q = 0.03;
    const double mu = keyrate::sampling_deviation(n, m, sec);
    const double expected = n * (1.0 - keyrate::entropy_ext(q + mu)) -
                            1.2 * n * keyrate::entropy_ext(q) -
                            std::log2(2.0 / (sec.eps_sec * sec.eps_sec * sec.eps_cor));
    CHECK(keyrate::key_len_nonblockwise(n, m, q, sec) ==
          doctest::Approx(expected).epsilon(1e-12));
    // A multiplier of 1 against h(Q) leaks less than the default h(Q+mu).
    keyrate::SecurityParams unity = sec;
    unity.lambda_ec_multiplier = 1.0;
    CHECK(keyrate::key_len_nonblockwise(n, m, q, unity) >
          keyrate::key_len_nonblockwise(n, m, q, kSec));

    keyrate::SecurityParams bad;
    bad.lambda_ec_multiplier = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("key length converges to the asymptotic rate") {
    // At n = 1e9, m = 0.05 n the per-signal rate sits within 0.01 of the
    // asymptote, and closer than at n = 1e7.
    for (double q : {0.01, 0.05, 0.1}) {
        auto gap = [&](double n) {
            const double m = 0.05 * n;
            const double rate = keyrate::key_len_nonblockwise(n, m, q, kSec) / (n + m);
            const double limit = n / (n + m) * (1.0 - 2.0 * keyrate::entropy_ext(q));
            return std::abs(rate - limit);
        };
        CHECK(gap(1e9) < 0.01);
        CHECK(gap(1e9) < gap(1e7));
    }
}

TEST_CASE("blockwise key length") {
    SUBCASE("single block equals the non-blockwise formula") {
        const auto b = block(2e6, 0.02, 5e5);
        CHECK(keyrate::key_len_blockwise({&b, 1}, kSec) ==
              doctest::Approx(keyrate::key_len_nonblockwise(2e6 - 5e5, 5e5, 0.02, kSec))
                  .epsilon(1e-15));
    }
    SUBCASE("splitting homogeneous data costs key") {
        const keyrate::BlockStats halves[] = {block(1e5, 0.02, 5e4, "a"),
                                              block(1e5, 0.02, 5e4, "b")};
        const double split = keyrate::key_len_blockwise(halves, kSec);
        const double pooled = keyrate::key_len_nonblockwise(1e5, 1e5, 0.02, kSec);
        CHECK(pooled > split);
    }
    SUBCASE("a hopeless block clamps to zero instead of dragging the sum") {
        const keyrate::BlockStats blocks[] = {block(1e9, 0.01, 1e7, "night"),
                                              block(1e9, 0.2, 1e7, "day")};
        const double blockwise = keyrate::key_len_blockwise(blocks, kSec);
        const double night_only =
            keyrate::key_len_nonblockwise(1e9 - 1e7, 1e7, 0.01, kSec);
        CHECK(blockwise == doctest::Approx(night_only).epsilon(1e-12));

        const double pooled_q = keyrate::pooled_qber(blocks);
        const double pooled =
            keyrate::key_len_nonblockwise(2e9 - 2e7, 2e7, pooled_q, kSec);
        CHECK(blockwise > pooled);
    }
    SUBCASE("degenerate blocks contribute nothing") {
        const keyrate::BlockStats blocks[] = {block(0.0, 0.0, 0.0, "empty"),
                                              block(100.0, 0.0, 0.0, "unsampled")};
        CHECK(keyrate::key_len_blockwise(blocks, kSec) == 0.0);
    }
}

TEST_CASE("pooled QBER") {
    const keyrate::BlockStats equal[] = {block(100, 0.0, 0), block(100, 0.1, 0)};
    CHECK(keyrate::pooled_qber(equal) == doctest::Approx(0.05).epsilon(1e-15));

    const auto one = block(123, 0.07, 0);
    CHECK(keyrate::pooled_qber({&one, 1}) == doctest::Approx(0.07).epsilon(1e-15));

    const keyrate::BlockStats skewed[] = {block(300, 0.01, 0), block(100, 0.05, 0)};
    CHECK(keyrate::pooled_qber(skewed) == doctest::Approx(0.02).epsilon(1e-12));

    const keyrate::BlockStats empty[] = {block(0, 0.0, 0), block(0, 0.0, 0)};
    CHECK_THROWS_AS(keyrate::pooled_qber(empty), std::domain_error);
}

TEST_CASE("asymptotic rates") {
    CHECK(keyrate::asymptotic_rate_nonblock(0.0) == 1.0);
    CHECK(keyrate::asymptotic_rate_nonblock(0.5) == 0.0);
    CHECK(keyrate::asymptotic_rate_nonblock(0.05) ==
          doctest::Approx(0.4272062).epsilon(1e-6));

    const std::vector<double> w{0.5, 0.5};
    const std::vector<double> q{0.01, 0.2};
    CHECK(keyrate::asymptotic_rate_block(w, q) ==
          doctest::Approx(0.419207).epsilon(1e-5));
    CHECK(keyrate::asymptotic_rate_nonblock(0.105) ==
          doctest::Approx(0.030704).epsilon(1e-4));

    const std::vector<double> homog_q{0.03, 0.03, 0.03};
    const std::vector<double> homog_w{0.2, 0.5, 0.3};
    CHECK(keyrate::asymptotic_rate_block(homog_w, homog_q) ==
          doctest::Approx(keyrate::asymptotic_rate_nonblock(0.03)).epsilon(1e-12));

    const std::vector<double> degenerate_w{1.0, 0.0};
    const std::vector<double> degenerate_q{0.02, 0.4};
    CHECK(keyrate::asymptotic_rate_block(degenerate_w, degenerate_q) ==
          doctest::Approx(keyrate::asymptotic_rate_nonblock(0.02)).epsilon(1e-12));

    const std::vector<double> short_q{0.02};
    CHECK_THROWS_AS(keyrate::asymptotic_rate_block(w, short_q),
                    std::invalid_argument);
}

TEST_CASE("relative difference") {
    CHECK(keyrate::relative_difference(0.2, 0.2) == 0.0);
    CHECK(keyrate::relative_difference(1.05 * 0.4, 0.4) ==
          doctest::Approx(0.05).epsilon(1e-12));
    CHECK_THROWS_AS(keyrate::relative_difference(0.1, 0.0), std::domain_error);
}

TEST_CASE("Jensen dominance of blockwise asymptotics") {
    std::mt19937 rng(20240518);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> nblocks(2, 6);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = nblocks(rng);
        std::vector<double> w(k), q(k);
        double wsum = 0.0;
        for (int i = 0; i < k; ++i) {
            w[i] = u01(rng) + 1e-6;
            wsum += w[i];
            q[i] = 0.5 * u01(rng);
        }
        double pooled = 0.0;
        for (int i = 0; i < k; ++i) {
            w[i] /= wsum;
            pooled += w[i] * q[i];
        }
        CHECK(keyrate::asymptotic_rate_block(w, q) >=
              keyrate::asymptotic_rate_nonblock(pooled) - 1e-12);
    }
}

TEST_CASE("agreement with the extended-precision oracle") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return std::pow(10.0, std::log10(lo) + u01(rng) * (std::log10(hi) - std::log10(lo)));
    };
    for (int i = 0; i < 1000; ++i) {
        const double x = -0.2 + 1.4 * u01(rng);
        const double ex = keyrate::entropy_ext(x);
        const double ox = static_cast<double>(oracle::entropy_ext(x));
        CHECK(std::abs(ex - ox) <= 1e-9 * std::max(1.0, std::abs(ox)));

        const double n = log_uniform(1.0, 1e12);
        const double m = log_uniform(1.0, 1e12);
        const double mu = keyrate::sampling_deviation(n, m, kSec);
        const double omu = static_cast<double>(
            oracle::sampling_deviation(n, m, kSec.eps_sec));
        CHECK(std::abs(mu - omu) <= 1e-9 * std::max(1.0, std::abs(omu)));

        const double q = 0.45 * u01(rng);
        const double len = keyrate::key_len_nonblockwise(n, m, q, kSec);
        const double olen = static_cast<double>(oracle::key_len_nonblockwise(
            n, m, q, kSec.eps_sec, kSec.eps_cor));
        CHECK(std::abs(len - olen) <= 1e-9 * std::max(1.0, std::abs(olen)));
    }
}

TEST_CASE("security parameter validation") {
    keyrate::SecurityParams bad;
    bad.eps_sec = 0.0;
    bad.eps_cor = 2.0;
    CHECK(bad.violations().size() == 2);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
