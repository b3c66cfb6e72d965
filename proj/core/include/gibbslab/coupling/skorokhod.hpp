#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gibbslab/spectral/field.hpp"
#include "gibbslab/support/rng.hpp"
#include "gibbslab/support/stats.hpp"

namespace gibbslab {

struct SkorokhodInputs {
    double L = 16.0;
    double eta = 0.1;
    double alpha = 0.5;
    double beta = 1.0;
    double kappa = 1.0;
    double theta = 0.5;
    double rate = 1.0;   // the constant c in eps_L = exp(-c kappa L^beta / 16)
    double L0 = 1.0;     // smallest admissible L
};

struct SkorokhodParams {
    SkorokhodInputs in;
    double R = 0.0;          // L^eta
    long K = 0;              // ceil(R L^{2 eta / alpha})
    double eps = 0.0;
    double eps_tilde = 0.0;
    double delta = 0.0;      // R / K
    std::vector<double> x;   // x_k = k delta, k = -K..K
    double M = 0.0;          // empirical (1 - eps_tilde) quantile of max_k |coordinates|
    long J = 0;              // ceil(8 L^eta M)
    double tau = 0.0;        // M / J
};

SkorokhodParams derive_params(const SkorokhodInputs& in, std::span<const TorusField> target);

// Lattice corner per grid point, interleaved (j1, j2) for k = -K..K.
struct CellIndex {
    std::vector<std::int32_t> j;
    bool operator==(const CellIndex&) const = default;
};

struct CellIndexHash {
    std::size_t operator()(const CellIndex& c) const noexcept;
};

// nullopt: some coordinate leaves [-M, M] (part of the bad set)
std::optional<CellIndex> assign_cell(const TorusField& phi, const SkorokhodParams& params);

enum class Branch { GoodCell, BadSet, Correction, Fallback };
const char* branch_name(Branch b);

struct CoupledPair {
    std::size_t target = 0;
    std::size_t approx = 0;
    Branch branch = Branch::Correction;
    std::optional<CellIndex> cell;  // target's cell when it has one
};

struct CouplingResult {
    std::vector<CoupledPair> pairs;
    std::size_t good_cells = 0;
    std::size_t fallbacks = 0;
    double clip_mass = 0.0;  // total negative residual weight clipped to 0
};

CouplingResult build_coupling(std::span<const TorusField> target, std::span<const TorusField> approx,
                              const SkorokhodParams& params, Rng& rng);

// max_k |phi(x_k) - psi(x_k)|
double grid_distance(const TorusField& phi, const TorusField& psi, const SkorokhodParams& params);

struct QualityEstimate {
    double L = 0.0;
    std::size_t exceed = 0;
    std::size_t total = 0;
    double probability = 0.0;
    stats::Interval ci;
};

// Fraction of pairs with |phi - phi_L|_{C^0([-L^eta, L^eta])} > L^{-eta}.
QualityEstimate coupling_quality(std::span<const TorusField> target, std::span<const TorusField> approx, double eta,
                                 double L);

}  // namespace gibbslab
