#pragma once

#include <span>

#include "gibbslab/spectral/field.hpp"
#include "gibbslab/support/rng.hpp"

namespace gibbslab {

// Massive Gaussian free field on T_L (mass 1), truncated to the M grid modes:
//   phi = (2 pi L)^{-1/2} sum_n g_n <n>^{-1} e^{inx},  Re g_n, Im g_n iid N(0,1).
TorusField sample_gff(const TorusGrid& grid, Rng& rng);
void sample_gff_coefficients(const TorusGrid& grid, Rng& rng, std::span<cplx> coeffs);

// Standard deviation of a single Fourier coefficient c_n (per real component).
double gff_coefficient_scale(const TorusGrid& grid, double n);

// Var(Re phi(x)) for the truncated field; independent of x.
double gff_real_part_variance(const TorusGrid& grid);

}  // namespace gibbslab
