#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gibbslab/measures/gibbs.hpp"
#include "gibbslab/spectral/field.hpp"
#include "gibbslab/support/rng.hpp"

namespace gibbslab {

// (d_t + 1 - Delta) psi = -(1 - tilt (p+1) 1_{[-1,1]}) |psi|^{p-1} psi + sqrt(2) zeta
struct LangevinConfig {
    GibbsSpec spec;
    double dt = 1e-3;
    double tilt_beta = 0.0;
    bool taming = false;
};

LangevinConfig default_langevin_config(const GibbsSpec& spec);
void validate(const LangevinConfig& cfg);

struct LangevinState {
    TorusField psi;
    std::vector<cplx> psi_hat;  // Fourier coefficients of psi, kept in sync
    std::vector<cplx> lin_hat;  // stochastic convolution: same noise, zero initial data
    double t = 0.0;
    std::uint64_t step = 0;
    std::uint64_t tamed_steps = 0;

    TorusField linear() const;
};

LangevinState make_langevin_state(const TorusField& psi0);

class LangevinIntegrator {
public:
    explicit LangevinIntegrator(const LangevinConfig& cfg);

    const LangevinConfig& config() const noexcept { return cfg_; }
    const TorusGrid& grid() const noexcept { return cfg_.spec.grid; }
    void set_dt(double dt);

    void step(LangevinState& s, Rng& rng);
    // xi: one standard complex normal per node (E|xi|^2 = 2)
    void step_with_noise(LangevinState& s, std::span<const cplx> xi);
    void advance(LangevinState& s, double duration, Rng& rng);

private:
    void rebuild();
    LangevinConfig cfg_;
    std::vector<double> decay_, phi1_, noise_scale_, tilt_;
    std::vector<cplx> work_, drift_hat_, noise_hat_, noise_;
};

LangevinState step_langevin(LangevinState state, const LangevinConfig& cfg, Rng& rng);

struct EquilibriumOptions {
    double burn_in = 3.0;       // time units per chain
    std::size_t n_samples = 1000;
    double thinning = 1.0;      // time between retained samples
    std::size_t n_chains = 1;
    unsigned workers = 1;
    bool adaptive_dt = true;    // halve dt if taming fires on > 1% of steps
};

// Chains start from independent free-field draws. Chain c uses stream (seed, c).
Ensemble run_to_equilibrium(const LangevinConfig& cfg, const EquilibriumOptions& opts, std::uint64_t seed);

struct HeatCheck {
    double lhs = 0.0;  // |e^{t Delta} phi|_{CE^theta}
    double rhs = 0.0;  // 2 e^{theta^2 t} |phi|_{CE^theta}
    bool holds = false;
};

HeatCheck heat_ce_bound_check(const TorusField& phi, double theta, double t);

}  // namespace gibbslab
