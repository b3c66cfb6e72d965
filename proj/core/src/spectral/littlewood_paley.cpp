#include "gibbslab/spectral/littlewood_paley.hpp"

#include <cmath>
#include <string>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

namespace {
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}
}  // namespace

double lp_bump(double xi) {
    double a = std::abs(xi);
    if (a <= 1.0) return 1.0;
    if (a >= 1.125) return 0.0;
    return smooth_step((1.125 - a) * 8.0);
}

Dyadic::Dyadic(double N) {
    require(std::isfinite(N) && N >= 1.0, "Dyadic: N must be >= 1");
    int e = 0;
    double m = std::frexp(N, &e);
    require(m == 0.5, "Dyadic: N must be a power of two, got " + std::to_string(N));
    value_ = N;
    exponent_ = e - 1;
}

Dyadic Dyadic::from_exponent(int k) {
    require(k >= 0 && k < 60, "Dyadic: exponent out of range");
    return Dyadic(std::ldexp(1.0, k));
}

double lp_symbol(double xi, Dyadic N) { return lp_bump(xi / N.value()); }

double lp_piece_symbol(double xi, Dyadic N) {
    if (N.exponent() == 0) return lp_bump(xi);
    return lp_bump(xi / N.value()) - lp_bump(2.0 * xi / N.value());
}

double cutoff_symbol(double xi, double R) {
    require(R > 0.0, "cutoff_symbol: R must be positive");
    return lp_bump(xi / R);
}

TorusField apply_projector(const TorusField& u, Projector P) {
    require(P.N.value() <= u.grid().nyquist(), "apply_projector: N exceeds the grid Nyquist frequency");
    switch (P.kind) {
        case ProjectorKind::LowPass:
            return apply_fourier_multiplier(u, [N = P.N](double n) { return lp_symbol(n, N); });
        case ProjectorKind::Piece:
            return apply_fourier_multiplier(u, [N = P.N](double n) { return lp_piece_symbol(n, N); });
        case ProjectorKind::HighPass:
            return apply_fourier_multiplier(u, [N = P.N](double n) { return 1.0 - lp_symbol(n, N); });
    }
    fail_config("apply_projector: unknown kind");
}

TorusField apply_cutoff(const TorusField& u, double R) {
    require(R > 0.0, "apply_cutoff: R must be positive");
    if (1.125 * R > u.grid().nyquist()) return u;
    return apply_fourier_multiplier(u, [R](double n) { return lp_bump(n / R); });
}

TorusField commutator_apply(const TorusField& Q, const TorusField& u, Dyadic R) {
    require(Q.grid() == u.grid(), "commutator_apply: grid mismatch");
    const Projector P{ProjectorKind::LowPass, R};
    TorusField pu = apply_projector(u, P);
    TorusField qu = u;
    for (std::size_t j = 0; j < u.size(); ++j) {
        pu[j] *= Q[j];
        qu[j] *= Q[j];
    }
    return pu - apply_projector(qu, P);
}

}  // namespace gibbslab
