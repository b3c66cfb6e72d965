#pragma once

#include <complex>
#include <span>

namespace gibbslab {

using cplx = std::complex<double>;

// Unnormalised DFTs: forward uses exp(-2 pi i jk/M), backward exp(+2 pi i jk/M).
// in and out may alias. Plans are cached per thread.
void dft_forward(std::span<const cplx> in, std::span<cplx> out);
void dft_backward(std::span<const cplx> in, std::span<cplx> out);

// Fourier coefficients of a grid function on T_L:
//   c_k = (1/M) sum_j u_j exp(-i n_k x_j) = (2 pi L)^{-1} int u exp(-i n x) dx (trapezoid),
// stored at FFT index (k mod M). Grid nodes start at -pi L.
void to_coefficients(std::span<const cplx> values, std::span<cplx> coeffs);
void from_coefficients(std::span<const cplx> coeffs, std::span<cplx> values);

}  // namespace gibbslab
