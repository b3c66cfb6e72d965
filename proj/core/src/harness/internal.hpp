#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gibbslab/harness/harness.hpp"
#include "gibbslab/measures/gibbs.hpp"
#include "gibbslab/nls/nls.hpp"
#include "gibbslab/support/rng.hpp"

namespace gibbslab::harness {

unsigned workers(const ExperimentConfig& c);

// M from model.M, else round(L * model.modes_per_unit) made even.
TorusGrid model_grid(const ExperimentConfig& c, double L, double default_modes_per_unit);

struct SamplerSetup {
    std::string method = "langevin";  // langevin | pcn | gff
    std::size_t n = 0;
    double dt = 2e-3;
    double burn_in = 3.0;
    double thinning = 1.0;
    std::size_t chains = 20;
    double step = 0.3;
    bool taming = false;
};

SamplerSetup sampler_setup(const ExperimentConfig& c, const GibbsSpec& spec, std::size_t default_n,
                           const std::string& default_method);
Ensemble draw_ensemble(const GibbsSpec& spec, const SamplerSetup& s, std::uint64_t seed, unsigned workers);
std::string describe(const SamplerSetup& s);

// Langevin flows on tori L[0] > L[1] > ... driven by shared noise from a free
// field on T_{L[0]}. Spacing 2 pi / modes_per_unit on every torus.
struct CoupledSetup {
    double p = 3.0;
    std::vector<double> L;
    double modes_per_unit = 32.0;
    double dt = 1e-3;
    double burn_in = 3.0;
    bool taming = false;
};

struct CoupledDraw {
    std::vector<TorusField> fields;  // one per torus, same order as setup.L
    std::vector<double> t;                 // record times when traced
    std::vector<std::vector<double>> ce;   // ce[k][i]: CE^theta(psi_{L0} - psi_{Lk+1}) at t[i]
};

CoupledDraw coupled_draw(const CoupledSetup& s, Rng& rng, double theta = 0.0, double record_dt = 0.0);

// Steps every field with NLS for time T, calling on_slice(k, t) at t = k slice_dt.
void evolve_nls(std::vector<TorusField>& u, const NlsConfig& cfg, double T, double slice_dt,
                const std::function<void(std::size_t, double)>& on_slice);

ExperimentResult run_sample(const ExperimentConfig& c);
ExperimentResult run_tails(const ExperimentConfig& c);
ExperimentResult run_moments(const ExperimentConfig& c);
ExperimentResult run_invariance(const ExperimentConfig& c);
ExperimentResult run_gronwall(const ExperimentConfig& c);
ExperimentResult run_iterated(const ExperimentConfig& c);
ExperimentResult run_coupling(const ExperimentConfig& c);
ExperimentResult run_wasserstein(const ExperimentConfig& c);
ExperimentResult run_convergence(const ExperimentConfig& c);

}  // namespace gibbslab::harness
