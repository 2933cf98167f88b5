#include "satkd/source.hpp"

#include <cmath>
#include <stdexcept>

namespace satkd::source {

void SourceParams::validate() const {
    if (!(pump_power >= 0.0 && pump_power <= 0.2))
        throw std::invalid_argument(
            "SourceParams: pump_power must be in [0, 0.2] (truncated photon-number "
            "model is only valid at low pump)");
}

EmissionDistribution emission_distribution(const SourceParams& params) {
    params.validate();
    const double ns = params.pump_power;
    // p(n) = (n+1) Ns^n / (Ns+1)^(n+2), n = 0, 1, 2
    double p[3];
    for (int n = 0; n < 3; ++n)
        p[n] = (n + 1) * std::pow(ns, n) / std::pow(ns + 1.0, n + 2);
    const double total = p[0] + p[1] + p[2];

    EmissionDistribution dist;
    dist.p_vacuum = p[0] / total;
    dist.p_pair = p[1] / total;
    dist.p_two_photon = p[2] / total;
    if (params.idealized) {
        const double keep = 1.0 - dist.p_two_photon;
        dist.p_vacuum /= keep;
        dist.p_pair /= keep;
        dist.p_two_photon = 0.0;
    }
    return dist;
}

std::array<TwoPhotonConfig, 3> two_photon_configurations() {
    constexpr double w = 1.0 / 3.0;
    return {{
        {2, 0, 0, 2, w},
        {1, 1, 1, 1, w},
        {0, 2, 2, 0, w},
    }};
}

}  // namespace satkd::source
