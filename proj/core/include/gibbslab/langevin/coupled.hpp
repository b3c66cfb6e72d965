#pragma once

#include <vector>

#include "gibbslab/langevin/langevin.hpp"

namespace gibbslab {

// One flow on a large torus T_K and any number of flows on smaller tori T_L,
// driven by the same space-time white noise on the nodes they share. All grids
// must have the same spacing with the small nodes embedded in the large grid.
class CoupledFlows {
public:
    CoupledFlows(const LangevinConfig& big, const std::vector<LangevinConfig>& small);

    // Initialise the small flows by restricting the large-torus datum.
    void initialise(const TorusField& big0);
    void initialise(const TorusField& big0, const std::vector<TorusField>& small0);

    void step(Rng& rng);
    void advance(double duration, Rng& rng);

    const LangevinState& big() const noexcept { return big_state_; }
    const LangevinState& small(std::size_t i) const { return small_states_.at(i); }
    std::size_t small_count() const noexcept { return small_states_.size(); }
    double dt() const noexcept { return big_int_.config().dt; }
    std::size_t offset(std::size_t i) const { return offsets_.at(i); }
    struct CoupledState pair(std::size_t i) const;

private:
    LangevinIntegrator big_int_;
    std::vector<LangevinIntegrator> small_int_;
    std::vector<std::size_t> offsets_;
    LangevinState big_state_;
    std::vector<LangevinState> small_states_;
    std::vector<cplx> noise_;
};

// Restriction of a large-torus field to the nodes of an aligned small grid.
TorusField restrict_to_grid(const TorusField& big, const TorusGrid& small);

// Pairwise snapshot with the difference diagnostics.
struct CoupledState {
    LangevinState big;
    LangevinState small;
    // CE^theta distances of psi_K - psi_L and of the linear parts
    double psi_distance(double theta) const;
    double linear_distance(double theta) const;
};

}  // namespace gibbslab
