#include "gibbslab/spectral/grid.hpp"

#include <string>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

TorusGrid::TorusGrid(double L, std::size_t M)
    : L_(L), M_(M), dx_(2.0 * std::numbers::pi * L / static_cast<double>(M)) {
    require(std::isfinite(L) && L > 0.0, "grid: L must be positive");
    require(M >= 2 && M % 2 == 0, "grid: M must be even");
}

double TorusGrid::wrap(double x) const noexcept {
    const double P = period();
    double y = x - P * std::floor((x + half_period()) / P);
    if (y >= half_period()) y -= P;
    return y;
}

TorusGrid make_grid(double L, std::size_t M) {
    require(std::isfinite(L) && L >= 1.0, "make_grid: L must be >= 1, got " + std::to_string(L));
    require(M >= 8 && M % 2 == 0, "make_grid: M must be even and >= 8, got " + std::to_string(M));
    return TorusGrid(L, M);
}

bool grids_aligned(const TorusGrid& big, const TorusGrid& small, std::size_t* offset) {
    if (std::abs(big.dx() - small.dx()) > 1e-12 * big.dx()) return false;
    if (small.M() > big.M()) return false;
    double s = (small.x(0) - big.x(0)) / big.dx();
    double r = std::round(s);
    if (std::abs(s - r) > 1e-9 || r < 0) return false;
    if (offset) *offset = static_cast<std::size_t>(r);
    return true;
}

}  // namespace gibbslab
