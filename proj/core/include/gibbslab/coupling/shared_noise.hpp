#pragma once

#include <cstdint>
#include <vector>

#include "gibbslab/langevin/langevin.hpp"

namespace gibbslab {

struct SharedNoiseSample {
    TorusField big;                 // on T_K
    std::vector<TorusField> small;  // one per requested L
};

struct SharedNoiseOptions {
    double K = 128.0;
    std::vector<double> L;              // each L <= K
    double modes_per_unit_L = 32.0;     // M = modes_per_unit_L * L, equal spacing on every torus
    double p = 3.0;
    double dt = 0.01;
    double burn_in = 5.0;
    std::size_t n_samples = 100;
    bool taming = false;
    unsigned workers = 1;
};

// Free field on T_K, restricted to the small tori, then all flows run with
// shared noise for burn_in time units. Sample i uses stream (seed, i).
std::vector<SharedNoiseSample> langevin_shared_noise_coupling(const SharedNoiseOptions& opts, std::uint64_t seed);

TorusGrid coupling_grid(double L, double modes_per_unit_L);

}  // namespace gibbslab
