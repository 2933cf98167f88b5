#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "satkd/source.hpp"

using namespace satkd;

TEST_CASE("no pump gives pure vacuum") {
    const auto dist = source::emission_distribution({0.0, false});
    CHECK(dist.p_vacuum == 1.0);
    CHECK(dist.p_pair == 0.0);
    CHECK(dist.p_two_photon == 0.0);
}

TEST_CASE("sector probabilities at pump 0.1") {
    const auto dist = source::emission_distribution({0.1, false});
    CHECK(dist.p_vacuum == doctest::Approx(0.82877).epsilon(2e-5));
    CHECK(dist.p_pair == doctest::Approx(0.15068).epsilon(2e-5));
    CHECK(dist.p_two_photon == doctest::Approx(0.02055).epsilon(2e-5));
    CHECK(dist.p_vacuum + dist.p_pair + dist.p_two_photon ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("idealized source at pump 0.1") {
    const auto dist = source::emission_distribution({0.1, true});
    CHECK(dist.p_vacuum == doctest::Approx(0.84615).epsilon(2e-5));
    CHECK(dist.p_pair == doctest::Approx(0.15385).epsilon(2e-5));
    CHECK(dist.p_two_photon == 0.0);
}

TEST_CASE("idealization preserves the vacuum-to-pair ratio") {
    for (double ns : {0.01, 0.05, 0.1, 0.2}) {
        const auto full = source::emission_distribution({ns, false});
        const auto ideal = source::emission_distribution({ns, true});
        CHECK(ideal.p_vacuum / ideal.p_pair ==
              doctest::Approx(full.p_vacuum / full.p_pair).epsilon(1e-12));
        CHECK(ideal.p_vacuum + ideal.p_pair == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("monotone trends in pump power") {
    double prev_pair = 0.0;
    double prev_vacuum = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double ns = 0.001 * i;  // up to 0.1
        const auto d = source::emission_distribution({ns, false});
        CHECK(d.p_pair > prev_pair);
        CHECK(d.p_vacuum < prev_vacuum);
        prev_pair = d.p_pair;
        prev_vacuum = d.p_vacuum;
    }
    // Two-photon fraction vanishes relative to pairs at low pump.
    const auto lo = source::emission_distribution({1e-4, false});
    const auto hi = source::emission_distribution({1e-2, false});
    CHECK(lo.p_two_photon / lo.p_pair < hi.p_two_photon / hi.p_pair);
    CHECK(lo.p_two_photon / lo.p_pair < 2e-4);
}

TEST_CASE("truncated sum matches the closed-form normalization") {
    // p(0)+p(1)+p(2) = (6 Ns^2 + 4 Ns + 1) / (Ns+1)^4 = 1/N0^2
    for (double ns : {1e-4, 1e-3, 0.01, 0.05, 0.1, 0.15, 0.2}) {
        double raw = 0.0;
        for (int n = 0; n < 3; ++n)
            raw += (n + 1) * std::pow(ns, n) / std::pow(ns + 1.0, n + 2);
        const double inv_n0sq =
            (6.0 * ns * ns + 4.0 * ns + 1.0) / std::pow(ns + 1.0, 4);
        CHECK(std::abs(raw - inv_n0sq) <= 1e-12);
    }
}

TEST_CASE("two-photon configurations") {
    const auto configs = source::two_photon_configurations();
    double total = 0.0;
    for (const auto& c : configs) {
        total += c.weight;
        CHECK(c.station1_rail_a + c.station1_rail_b == 2);
        CHECK(c.station2_rail_a + c.station2_rail_b == 2);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(configs[0].station1_rail_a == 2);
    CHECK(configs[0].station2_rail_b == 2);
    CHECK(configs[1].station1_rail_a == 1);
    CHECK(configs[1].station1_rail_b == 1);
    CHECK(configs[1].station2_rail_a == 1);
    CHECK(configs[1].station2_rail_b == 1);
    CHECK(configs[2].station1_rail_b == 2);
    CHECK(configs[2].station2_rail_a == 2);
}

TEST_CASE("pump power outside the model validity is rejected") {
    CHECK_THROWS_AS(source::emission_distribution({0.21, false}),
                    std::invalid_argument);
    CHECK_THROWS_AS(source::emission_distribution({-0.01, false}),
                    std::invalid_argument);
    CHECK_NOTHROW(source::emission_distribution({0.2, false}));
}
