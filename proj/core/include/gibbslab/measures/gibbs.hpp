#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gibbslab/spectral/field.hpp"
#include "gibbslab/support/rng.hpp"

namespace gibbslab {

// Gibbs measure d mu_L = Z^{-1} exp(-s/(p+1) int |phi|^{p+1}) d(GFF).
// potential_strength s = 0 reduces to the free field.
struct GibbsSpec {
    TorusGrid grid;
    double p = 3.0;
    double potential_strength = 1.0;
};

void validate(const GibbsSpec& spec);

// (1/(p+1)) int |phi|^{p+1} dx over the fundamental domain (trapezoid)
double potential_energy(const TorusField& phi, double p);
// -(1/(p+1)) int |phi|^{p+1}; NumericalFailure on overflow
double log_gibbs_weight(const TorusField& phi, double p);

struct Provenance {
    std::string sampler;
    std::uint64_t seed = 0;
    double burn_in = 0.0;
    double thinning = 0.0;
    double acceptance_rate = -1.0;  // pCN only
    std::vector<std::string> warnings;
};

struct Ensemble {
    GibbsSpec spec;
    std::vector<TorusField> members;
    Provenance provenance;
};

struct PcnOptions {
    std::size_t n_samples = 1000;
    std::size_t burn_in = 1000;    // proposals
    double step = 0.1;             // beta_pcn in (0, 1]
    std::size_t thinning = 1;      // proposals between retained samples
};

Ensemble sample_gibbs_pcn(const GibbsSpec& spec, const PcnOptions& opts, Rng& rng);

// fields.bin (field container) plus index.json (spec, seed, provenance)
void save_ensemble(const std::filesystem::path& dir, const Ensemble& e);
Ensemble load_ensemble(const std::filesystem::path& dir);

}  // namespace gibbslab
