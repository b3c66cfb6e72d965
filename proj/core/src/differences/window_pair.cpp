#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gibbslab/differences/differences.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

std::vector<cplx> WindowPair::difference() const {
    std::vector<cplx> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = big_vals[i] - small_vals[i];
    return w;
}

WindowPair make_window_pair(const TorusField& u_big, const TorusField& u_small, Interval window) {
    const auto& gs = u_small.grid();
    require(u_small.grid().L() <= u_big.grid().L(), "window pair: the second field must live on the smaller torus");
    require(window.a < window.b, "window pair: empty window");
    const double h = gs.half_period() * (1.0 + 1e-12);
    require(window.a >= -h && window.b <= h, "window pair: window exceeds the smaller fundamental domain");
    WindowPair p{u_big, u_small, window, {}, {}, {}};
    for (std::size_t j = 0; j < gs.M(); ++j) {
        double x = gs.x(j);
        if (window.contains(x)) {
            p.x.push_back(x);
            p.small_vals.push_back(u_small[j]);
        }
    }
    require(p.x.size() >= 2, "window pair: window holds fewer than two grid nodes");
    p.big_vals = evaluate_at(u_big, p.x);
    return p;
}

std::vector<cplx> evaluate_on_window(const TorusField& field, const WindowPair& pair) {
    return evaluate_at(field, pair.x);
}

cplx power_nonlinearity(cplx z, double p) {
    double a2 = std::norm(z);
    if (p == 3.0) return a2 * z;
    if (p == 5.0) return a2 * a2 * z;
    if (a2 == 0.0) return 0.0;
    return std::pow(a2, 0.5 * (p - 1.0)) * z;
}

namespace {

bool odd_integer(double p, int* m) {
    double r = std::round(p);
    if (std::abs(p - r) > 0 || static_cast<long>(r) % 2 != 1) return false;
    *m = static_cast<int>((r - 1) / 2);
    return true;
}

template <class T>
std::vector<T> poly_mul(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> c(a.size() + b.size() - 1, T{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

template <class T>
T integrate_unit(const std::vector<T>& c) {
    T s{};
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] / static_cast<double>(k + 1);
    return s;
}

}  // namespace

QCoefficients q_coefficients(const WindowPair& pair, double p) {
    require(p >= 3.0, "q_coefficients: p must be >= 3");
    const std::size_t n = pair.x.size();
    QCoefficients q{std::vector<cplx>(n), std::vector<cplx>(n)};
    int m = 0;
    const bool odd = odd_integer(p, &m);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = pair.small_vals[i];
        const cplx w = pair.big_vals[i] - a;
        if (odd) {
            // |z|^2 = c0 + c1 th + c2 th^2 along z = a + th w
            std::vector<double> zz = {std::norm(a), 2.0 * (std::conj(a) * w).real(), std::norm(w)};
            std::vector<double> pw = {1.0};
            for (int k = 0; k < m - 1; ++k) pw = poly_mul(pw, zz);
            std::vector<cplx> sq = {a * a, 2.0 * a * w, w * w};
            std::vector<cplx> pwc(pw.begin(), pw.end());
            cplx minus = integrate_unit(poly_mul(pwc, sq));
            double plus = integrate_unit(poly_mul(pw, zz));
            q.plus[i] = 0.5 * (p + 1.0) * plus;
            q.minus[i] = 0.5 * (p - 1.0) * minus;
        } else {
            using boost::math::quadrature::gauss_kronrod;
            auto dz = [&](double th) {
                cplx z = a + th * w;
                return 0.5 * (p + 1.0) * std::pow(std::norm(z), 0.5 * (p - 1.0));
            };
            auto dzb = [&](double th) {
                cplx z = a + th * w;
                double r2 = std::norm(z);
                return r2 == 0.0 ? cplx{} : 0.5 * (p - 1.0) * std::pow(r2, 0.5 * (p - 3.0)) * z * z;
            };
            // |z| is not smooth where the segment passes near 0: split there, then adapt
            std::vector<double> cuts = {0.0, 1.0};
            if (std::norm(w) > 0) {
                double th = -(std::conj(a) * w).real() / std::norm(w);
                if (th > 0.0 && th < 1.0) cuts = {0.0, th, 1.0};
            }
            auto integrate = [&](auto&& g) {
                double acc = 0;
                for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
                    acc += gauss_kronrod<double, 31>::integrate(g, cuts[k], cuts[k + 1], 10, 1e-12);
                return acc;
            };
            q.plus[i] = integrate(dz);
            double re = integrate([&](double t) { return dzb(t).real(); });
            double im = integrate([&](double t) { return dzb(t).imag(); });
            q.minus[i] = {re, im};
        }
    }
    return q;
}

double factorization_residual(const WindowPair& pair, const QCoefficients& q, double p) {
    double r = 0;
    for (std::size_t i = 0; i < pair.x.size(); ++i) {
        cplx w = pair.big_vals[i] - pair.small_vals[i];
        cplx lhs = q.plus[i] * w + q.minus[i] * std::conj(w);
        cplx rhs = power_nonlinearity(pair.big_vals[i], p) - power_nonlinearity(pair.small_vals[i], p);
        r = std::max(r, std::abs(lhs - rhs));
    }
    return r;
}

}  // namespace gibbslab
