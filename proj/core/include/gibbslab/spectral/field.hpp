#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "gibbslab/spectral/fft.hpp"
#include "gibbslab/spectral/grid.hpp"

namespace gibbslab {

// Complex grid function on T_L. Spectral data is computed on demand.
class TorusField {
public:
    explicit TorusField(TorusGrid grid);
    TorusField(TorusGrid grid, std::vector<cplx> values);

    static TorusField from_function(const TorusGrid& grid, const std::function<cplx(double)>& f);
    static TorusField from_coefficients(const TorusGrid& grid, std::span<const cplx> coeffs);

    const TorusGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const cplx> values() const noexcept { return values_; }
    std::span<cplx> values() noexcept { return values_; }
    std::vector<cplx>& storage() noexcept { return values_; }
    cplx operator[](std::size_t j) const noexcept { return values_[j]; }
    cplx& operator[](std::size_t j) noexcept { return values_[j]; }

    std::vector<cplx> coefficients() const;

    // Trigonometric interpolant at an arbitrary point (periodic).
    cplx evaluate(double x) const;
    cplx at_origin() const noexcept { return values_[grid_.zero_index()]; }

    TorusField& operator+=(const TorusField& o);
    TorusField& operator-=(const TorusField& o);
    TorusField& operator*=(double s);

    bool all_finite() const noexcept;

private:
    TorusGrid grid_;
    std::vector<cplx> values_;
};

TorusField operator+(TorusField a, const TorusField& b);
TorusField operator-(TorusField a, const TorusField& b);
TorusField operator*(double s, TorusField a);

// Spectral Laplacian and heat semigroup e^{t Delta}.
TorusField laplacian(const TorusField& u);
TorusField heat_flow(const TorusField& u, double t);

// Multiply every Fourier coefficient by symbol(n), n the physical frequency.
TorusField apply_fourier_multiplier(const TorusField& u, const std::function<double(double)>& symbol);

// Periodic extension of u evaluated on the nodes of `target`. Node-aligned
// grids are copied exactly; otherwise the trigonometric interpolant is used.
TorusField resample_periodic(const TorusField& u, const TorusGrid& target);

// Values of u at arbitrary points (periodic extension).
std::vector<cplx> evaluate_at(const TorusField& u, std::span<const double> xs);

}  // namespace gibbslab
