#pragma once

#include <map>
#include <string>
#include <vector>

#include "gibbslab/spectral/field.hpp"

namespace gibbslab {

// i d_t u + Delta u = s |u|^{p-1} u, s = nonlinearity (1 defocusing, 0 linear)
struct NlsConfig {
    double p = 3.0;
    double dt = 1e-3;
    std::size_t padding = 1;  // 1: pointwise phase rotation on the native grid
    double nonlinearity = 1.0;
};

void validate(const NlsConfig& cfg);
// padding >= (p+1)/2 for odd integer p
bool alias_free(const NlsConfig& cfg);

// Strang: half kinetic, full potential (exact phase rotation), half kinetic.
class NlsSolver {
public:
    NlsSolver(const TorusGrid& grid, const NlsConfig& cfg);
    void step(TorusField& u);
    void advance(TorusField& u, double duration);
    const NlsConfig& config() const noexcept { return cfg_; }

private:
    void potential(TorusField& u);
    TorusGrid grid_;
    NlsConfig cfg_;
    std::vector<cplx> half_kinetic_;
    std::vector<cplx> hat_, pad_hat_, pad_vals_;
};

TorusField nls_step(const TorusField& u, const NlsConfig& cfg);

struct Conserved {
    double mass = 0.0;
    double kinetic = 0.0;    // int |d_x u|^2 / 2
    double potential = 0.0;  // int |u|^{p+1} / (p+1)
    double energy = 0.0;
};

Conserved conserved(const TorusField& u, double p);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> energy;
    std::vector<TorusField> snapshots;  // empty unless requested
    double max_relative_mass_drift() const;
    double max_relative_energy_drift() const;
};

TrajectoryRecord record_trajectory(const TorusField& u0, const NlsConfig& cfg, double T,
                                   std::size_t record_every = 1, bool keep_snapshots = false);

// |u|^{p-1} u formed on a grid padded to factor*M points, truncated back.
TorusField dealiased_nonlinearity(const TorusField& u, double p, std::size_t factor);
std::vector<cplx> padded_nonlinearity_coefficients(const TorusField& u, double p, std::size_t factor);

}  // namespace gibbslab
