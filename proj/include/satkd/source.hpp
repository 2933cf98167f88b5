#pragma once

#include <array>

namespace satkd::source {

struct SourceParams {
    double pump_power = 0.0;  // mean photon number per mode, valid up to 0.2
    bool idealized = false;   // force the two-photon sector to zero

    void validate() const;
};

// Photon-number sector probabilities of the SPDC output, truncated at two
// photons and renormalized. Sums to 1.
struct EmissionDistribution {
    double p_vacuum = 1.0;
    double p_pair = 0.0;
    double p_two_photon = 0.0;
};

EmissionDistribution emission_distribution(const SourceParams& params);

// Photon placement of one spurious two-photon emission, as counts per rail.
// Station 1 carries rails (a, b); station 2 carries rails (a, b).
struct TwoPhotonConfig {
    int station1_rail_a = 0;
    int station1_rail_b = 0;
    int station2_rail_a = 0;
    int station2_rail_b = 0;
    double weight = 0.0;  // conditional on the two-photon sector
};

// The three equally weighted placements (2,0;0,2), (1,1;1,1), (0,2;2,0).
std::array<TwoPhotonConfig, 3> two_photon_configurations();

}  // namespace satkd::source
