#include "gibbslab/langevin/coupled.hpp"

#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

TorusField restrict_to_grid(const TorusField& big, const TorusGrid& small) {
    std::size_t off = 0;
    require(grids_aligned(big.grid(), small, &off), "restrict_to_grid: grids are not node-aligned");
    std::vector<cplx> v(big.values().begin() + static_cast<long>(off),
                        big.values().begin() + static_cast<long>(off + small.M()));
    return TorusField(small, std::move(v));
}

CoupledFlows::CoupledFlows(const LangevinConfig& big, const std::vector<LangevinConfig>& small)
    : big_int_(big), big_state_(make_langevin_state(TorusField(big.spec.grid))) {
    for (const auto& c : small) {
        std::size_t off = 0;
        require(grids_aligned(big.spec.grid, c.spec.grid, &off),
                "coupled flows: small grid must share spacing and nodes with the large grid");
        require(c.dt == big.dt, "coupled flows: all flows must use the same dt");
        small_int_.emplace_back(c);
        offsets_.push_back(off);
        small_states_.push_back(make_langevin_state(TorusField(c.spec.grid)));
    }
    noise_.resize(big.spec.grid.M());
}

void CoupledFlows::initialise(const TorusField& big0) {
    std::vector<TorusField> small0;
    for (const auto& s : small_states_) small0.push_back(restrict_to_grid(big0, s.psi.grid()));
    initialise(big0, small0);
}

void CoupledFlows::initialise(const TorusField& big0, const std::vector<TorusField>& small0) {
    require(big0.grid() == big_int_.grid(), "coupled flows: initial datum grid mismatch");
    require(small0.size() == small_states_.size(), "coupled flows: wrong number of small data");
    big_state_ = make_langevin_state(big0);
    for (std::size_t i = 0; i < small0.size(); ++i) {
        require(small0[i].grid() == small_int_[i].grid(), "coupled flows: small datum grid mismatch");
        small_states_[i] = make_langevin_state(small0[i]);
    }
}

void CoupledFlows::step(Rng& rng) {
    rng.fill_complex_normal(noise_);
    big_int_.step_with_noise(big_state_, noise_);
    for (std::size_t i = 0; i < small_states_.size(); ++i) {
        std::span<const cplx> part(noise_.data() + offsets_[i], small_int_[i].grid().M());
        small_int_[i].step_with_noise(small_states_[i], part);
    }
}

void CoupledFlows::advance(double duration, Rng& rng) {
    auto n = static_cast<std::uint64_t>(std::llround(duration / dt()));
    for (std::uint64_t i = 0; i < n; ++i) step(rng);
}

CoupledState CoupledFlows::pair(std::size_t i) const { return {big_state_, small_states_.at(i)}; }

double CoupledState::psi_distance(double theta) const { return ce_theta_distance(big.psi, small.psi, theta); }

double CoupledState::linear_distance(double theta) const {
    return ce_theta_distance(big.linear(), small.linear(), theta);
}

}  // namespace gibbslab
