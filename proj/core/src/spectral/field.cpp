#include "gibbslab/spectral/field.hpp"

#include <cmath>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

TorusField::TorusField(TorusGrid grid) : grid_(grid), values_(grid.M(), cplx{}) {}

TorusField::TorusField(TorusGrid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
    require(values_.size() == grid_.M(), "field: value count does not match grid");
}

TorusField TorusField::from_function(const TorusGrid& grid, const std::function<cplx(double)>& f) {
    TorusField u(grid);
    for (std::size_t j = 0; j < grid.M(); ++j) u.values_[j] = f(grid.x(j));
    return u;
}

TorusField TorusField::from_coefficients(const TorusGrid& grid, std::span<const cplx> coeffs) {
    require(coeffs.size() == grid.M(), "field: coefficient count does not match grid");
    TorusField u(grid);
    gibbslab::from_coefficients(coeffs, u.values_);
    return u;
}

std::vector<cplx> TorusField::coefficients() const {
    std::vector<cplx> c(values_.size());
    to_coefficients(values_, c);
    return c;
}

cplx TorusField::evaluate(double x) const {
    auto c = coefficients();
    cplx s{};
    for (std::size_t j = 0; j < c.size(); ++j) {
        double ph = grid_.frequency(j) * x;
        s += c[j] * cplx(std::cos(ph), std::sin(ph));
    }
    return s;
}

TorusField& TorusField::operator+=(const TorusField& o) {
    require(grid_ == o.grid_, "field: grid mismatch in +=");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
}

TorusField& TorusField::operator-=(const TorusField& o) {
    require(grid_ == o.grid_, "field: grid mismatch in -=");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
}

TorusField& TorusField::operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
}

bool TorusField::all_finite() const noexcept {
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

TorusField operator+(TorusField a, const TorusField& b) { return a += b; }
TorusField operator-(TorusField a, const TorusField& b) { return a -= b; }
TorusField operator*(double s, TorusField a) { return a *= s; }

TorusField apply_fourier_multiplier(const TorusField& u, const std::function<double(double)>& symbol) {
    const auto& g = u.grid();
    std::vector<cplx> c(g.M());
    to_coefficients(u.values(), c);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= symbol(g.frequency(j));
    return TorusField::from_coefficients(g, c);
}

TorusField laplacian(const TorusField& u) {
    return apply_fourier_multiplier(u, [](double n) { return -n * n; });
}

TorusField heat_flow(const TorusField& u, double t) {
    require(t >= 0.0, "heat_flow: t must be non-negative");
    return apply_fourier_multiplier(u, [t](double n) { return std::exp(-n * n * t); });
}

std::vector<cplx> evaluate_at(const TorusField& u, std::span<const double> xs) {
    const auto& g = u.grid();
    std::vector<cplx> out(xs.size());
    std::vector<cplx> c;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double y = g.wrap(xs[i]);
        double s = (y + g.half_period()) / g.dx();
        double r = std::round(s);
        if (std::abs(s - r) < 1e-9) {
            out[i] = u[static_cast<std::size_t>(r) % g.M()];
            continue;
        }
        if (c.empty()) c = u.coefficients();
        cplx acc{};
        for (std::size_t j = 0; j < c.size(); ++j) {
            double ph = g.frequency(j) * y;
            acc += c[j] * cplx(std::cos(ph), std::sin(ph));
        }
        out[i] = acc;
    }
    return out;
}

TorusField resample_periodic(const TorusField& u, const TorusGrid& target) {
    if (u.grid() == target) return u;
    std::vector<double> xs(target.M());
    for (std::size_t j = 0; j < target.M(); ++j) xs[j] = target.x(j);
    return TorusField(target, evaluate_at(u, xs));
}

}  // namespace gibbslab
