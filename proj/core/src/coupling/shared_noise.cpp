#include "gibbslab/coupling/shared_noise.hpp"

#include <cmath>
#include <optional>

#include "gibbslab/langevin/coupled.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/parallel.hpp"

namespace gibbslab {

TorusGrid coupling_grid(double L, double modes_per_unit_L) {
    double m = L * modes_per_unit_L;
    auto M = static_cast<std::size_t>(std::llround(m));
    require(std::abs(m - static_cast<double>(M)) < 1e-9 && M % 2 == 0,
            "coupling_grid: modes_per_unit_L * L must be an even integer");
    return make_grid(L, M);
}

std::vector<SharedNoiseSample> langevin_shared_noise_coupling(const SharedNoiseOptions& o, std::uint64_t seed) {
    require(!o.L.empty(), "shared-noise coupling: no small tori requested");
    for (double L : o.L) require(L <= o.K, "shared-noise coupling: every L must satisfy L <= K");
    require(o.burn_in >= 0.0, "shared-noise coupling: burn-in must be non-negative");
    const TorusGrid gK = coupling_grid(o.K, o.modes_per_unit_L);
    LangevinConfig big{GibbsSpec{gK, o.p}, o.dt, 0.0, o.taming};
    std::vector<LangevinConfig> small;
    for (double L : o.L) small.push_back({GibbsSpec{coupling_grid(L, o.modes_per_unit_L), o.p}, o.dt, 0.0, o.taming});
    std::vector<std::optional<SharedNoiseSample>> slots(o.n_samples);
    parallel_for(
        o.n_samples,
        [&](std::size_t i) {
            Rng rng(seed, i);
            CoupledFlows flows(big, small);
            flows.initialise(sample_gff(gK, rng));
            flows.advance(o.burn_in, rng);
            SharedNoiseSample smp{flows.big().psi, {}};
            for (std::size_t k = 0; k < small.size(); ++k) smp.small.push_back(flows.small(k).psi);
            slots[i].emplace(std::move(smp));
        },
        o.workers);
    std::vector<SharedNoiseSample> out;
    out.reserve(o.n_samples);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace gibbslab
