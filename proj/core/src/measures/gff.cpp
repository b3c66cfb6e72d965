#include "gibbslab/measures/gff.hpp"

#include <cmath>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

double gff_coefficient_scale(const TorusGrid& grid, double n) {
    return 1.0 / (std::sqrt(grid.period()) * std::sqrt(1.0 + n * n));
}

void sample_gff_coefficients(const TorusGrid& grid, Rng& rng, std::span<cplx> coeffs) {
    require(coeffs.size() == grid.M(), "sample_gff: coefficient buffer size");
    for (std::size_t j = 0; j < grid.M(); ++j) {
        double s = gff_coefficient_scale(grid, grid.frequency(j));
        double re = rng.normal();
        double im = rng.normal();
        coeffs[j] = cplx(re * s, im * s);
    }
}

TorusField sample_gff(const TorusGrid& grid, Rng& rng) {
    std::vector<cplx> c(grid.M());
    sample_gff_coefficients(grid, rng, c);
    return TorusField::from_coefficients(grid, c);
}

double gff_real_part_variance(const TorusGrid& grid) {
    double s = 0;
    for (std::size_t j = 0; j < grid.M(); ++j) {
        double n = grid.frequency(j);
        s += 1.0 / (1.0 + n * n);
    }
    return s / grid.period();
}

}  // namespace gibbslab
