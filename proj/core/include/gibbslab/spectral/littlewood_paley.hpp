#pragma once

#include <cstdint>
#include <functional>

#include "gibbslab/spectral/field.hpp"

namespace gibbslab {

// Smooth even bump: 1 on [-1, 1], 0 outside [-9/8, 9/8], monotone between.
double lp_bump(double xi);

// A dyadic scale N = 2^k, k >= 0.
class Dyadic {
public:
    explicit Dyadic(double N);
    static Dyadic from_exponent(int k);
    double value() const noexcept { return value_; }
    int exponent() const noexcept { return exponent_; }
    bool operator==(const Dyadic&) const = default;

private:
    double value_;
    int exponent_;
};

// rho_{<=N}(xi) = rho(xi / N)
double lp_symbol(double xi, Dyadic N);
// rho_N = rho_{<=N} - rho_{<=N/2} for N >= 2, rho_1 = rho_{<=1}
double lp_piece_symbol(double xi, Dyadic N);
// rho(xi / R) for a real cutoff R > 0
double cutoff_symbol(double xi, double R);

enum class ProjectorKind { LowPass, Piece, HighPass };

struct Projector {
    ProjectorKind kind;
    Dyadic N;
};

// Rejects N above the grid Nyquist frequency.
TorusField apply_projector(const TorusField& u, Projector P);
// Real-valued low-pass P_{<=R}; identity once 9R/8 exceeds the grid Nyquist.
TorusField apply_cutoff(const TorusField& u, double R);

// [Q, P_{<=R}] u = Q P_{<=R} u - P_{<=R}(Q u) for a pointwise multiplier Q.
TorusField commutator_apply(const TorusField& Q, const TorusField& u, Dyadic R);

}  // namespace gibbslab
