#pragma once

#include <cmath>
#include <numbers>
#include <cstddef>

namespace gibbslab {

// Uniform grid on the torus T_L = R / (2 pi L Z), fundamental domain
// [-pi L, pi L). Node j sits at x_j = -pi L + j dx; x_{M/2} = 0.
class TorusGrid {
public:
    TorusGrid(double L, std::size_t M);

    double L() const noexcept { return L_; }
    std::size_t M() const noexcept { return M_; }
    double dx() const noexcept { return dx_; }
    double period() const noexcept { return 2.0 * std::numbers::pi * L_; }
    double half_period() const noexcept { return std::numbers::pi * L_; }

    double x(std::size_t j) const noexcept { return -std::numbers::pi * L_ + static_cast<double>(j) * dx_; }

    // Integer wavenumber k in [-M/2, M/2) stored at FFT index j.
    long mode(std::size_t j) const noexcept {
        return j < M_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(M_);
    }
    // Physical frequency n = k / L.
    double frequency(std::size_t j) const noexcept { return static_cast<double>(mode(j)) / L_; }
    double nyquist() const noexcept { return static_cast<double>(M_) / (2.0 * L_); }
    std::size_t zero_index() const noexcept { return M_ / 2; }

    // Periodic representative of x in [-pi L, pi L).
    double wrap(double x) const noexcept;

    bool operator==(const TorusGrid& o) const noexcept { return L_ == o.L_ && M_ == o.M_; }

private:
    double L_;
    std::size_t M_;
    double dx_;
};

// Validating factory: L >= 1, M >= 8 and even.
TorusGrid make_grid(double L, std::size_t M);

// True if the nodes of `small` are a subset of the nodes of `big` (same
// spacing, node offset an integer). Offset of small node 0 inside big.
bool grids_aligned(const TorusGrid& big, const TorusGrid& small, std::size_t* offset = nullptr);

}  // namespace gibbslab
