#include "gibbslab/spectral/norms.hpp"

#include <algorithm>
#include <cmath>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

namespace {

void check_interval(const TorusGrid& g, Interval I) {
    const double h = g.half_period() * (1.0 + 1e-12);
    require(I.a < I.b, "norm: interval must have a < b");
    require(I.a >= -h && I.b <= h, "norm: interval leaves the fundamental domain");
}

cplx value_at(const TorusField& u, double x) {
    const auto& g = u.grid();
    double s = (x + g.half_period()) / g.dx();
    double f = std::floor(s);
    double t = s - f;
    auto j = static_cast<long>(f);
    const long M = static_cast<long>(g.M());
    auto idx = [M](long k) { return static_cast<std::size_t>(((k % M) + M) % M); };
    if (t < 1e-12) return u[idx(j)];
    return (1.0 - t) * u[idx(j)] + t * u[idx(j + 1)];
}

}  // namespace

Restriction restrict_to(const TorusField& u, Interval I) {
    const auto& g = u.grid();
    check_interval(g, I);
    Restriction r;
    const double x0 = -g.half_period();
    auto first = static_cast<long>(std::ceil((I.a - x0) / g.dx() - 1e-9));
    auto last = static_cast<long>(std::floor((I.b - x0) / g.dx() + 1e-9));
    const double tol = 1e-9 * g.dx();
    if (std::abs(x0 + first * g.dx() - I.a) > tol) {
        r.x.push_back(I.a);
        r.v.push_back(value_at(u, I.a));
    }
    const long M = static_cast<long>(g.M());
    for (long j = first; j <= last; ++j) {
        r.x.push_back(x0 + j * g.dx());
        r.v.push_back(u[static_cast<std::size_t>(((j % M) + M) % M)]);
    }
    if (last < first || std::abs(x0 + last * g.dx() - I.b) > tol) {
        r.x.push_back(I.b);
        r.v.push_back(value_at(u, I.b));
    }
    return r;
}

double lp_on_samples(const Restriction& r, double p) {
    if (std::isinf(p)) {
        double m = 0;
        for (auto v : r.v) m = std::max(m, std::abs(v));
        return m;
    }
    require(p >= 1.0, "L^p norm needs p >= 1");
    double s = 0;
    double prev = std::pow(std::abs(r.v[0]), p);
    for (std::size_t i = 1; i < r.x.size(); ++i) {
        double cur = std::pow(std::abs(r.v[i]), p);
        s += 0.5 * (prev + cur) * (r.x[i] - r.x[i - 1]);
        prev = cur;
    }
    return std::pow(s, 1.0 / p);
}

double holder_seminorm_on_samples(const Restriction& r, double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, "Holder exponent must lie in (0, 1]");
    const std::size_t n = r.x.size();
    if (n < 2) return 0.0;
    const double h = (r.x.back() - r.x.front()) / static_cast<double>(n - 1);
    auto reach = static_cast<std::size_t>(std::ceil(1.0 / std::max(h, 1e-300))) + 2;
    reach = std::min(reach, n - 1);
    // all separations up to 64 nodes, geometric beyond, to stay near O(n log n)
    std::vector<std::size_t> seps;
    for (std::size_t s = 1; s <= reach; ++s) {
        if (n * reach <= 4'000'000 || s <= 64) {
            seps.push_back(s);
        } else {
            std::size_t next = static_cast<std::size_t>(std::ceil(static_cast<double>(seps.back()) * 1.05));
            s = std::max(s, next);
            if (s <= reach) seps.push_back(s);
        }
    }
    double best = 0;
    for (std::size_t s : seps) {
        for (std::size_t i = 0; i + s < n; ++i) {
            double d = r.x[i + s] - r.x[i];
            if (d <= 0 || d > 1.0 + 1e-12) continue;
            best = std::max(best, std::abs(r.v[i + s] - r.v[i]) / std::pow(d, alpha));
        }
    }
    return best;
}

double ce_theta(const TorusField& u, double theta) {
    require(theta > 0.0, "CE^theta needs theta > 0");
    const auto& g = u.grid();
    double m = 0;
    for (std::size_t j = 0; j < g.M(); ++j) m = std::max(m, std::exp(-theta * std::abs(g.x(j))) * std::abs(u[j]));
    return m;
}

double norm(const TorusField& u, const NormSpec& spec) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LpNorm>) {
                return lp_on_samples(restrict_to(u, s.I), s.p);
            } else if constexpr (std::is_same_v<T, LpLocNorm>) {
                Restriction r = restrict_to(u, s.I);
                double best = 0;
                for (double x0 : r.x) {
                    Interval J{std::max(s.I.a, x0 - 1.0), std::min(s.I.b, x0 + 1.0)};
                    if (J.b <= J.a) continue;
                    best = std::max(best, lp_on_samples(restrict_to(u, J), s.p));
                }
                return best;
            } else if constexpr (std::is_same_v<T, SupNorm>) {
                return lp_on_samples(restrict_to(u, s.I), kInfinity);
            } else if constexpr (std::is_same_v<T, HolderNorm>) {
                Restriction r = restrict_to(u, s.I);
                return lp_on_samples(r, kInfinity) + holder_seminorm_on_samples(r, s.alpha);
            } else {
                return ce_theta(u, s.theta);
            }
        },
        spec);
}

double ce_theta_distance(const TorusField& a, const TorusField& b, double theta) {
    if (a.grid() == b.grid()) return ce_theta(a - b, theta);
    const bool a_big = a.grid().L() >= b.grid().L();
    const TorusField& big = a_big ? a : b;
    const TorusField& small = a_big ? b : a;
    TorusField ext = resample_periodic(small, big.grid());
    return ce_theta(big - ext, theta);
}

double sigma_weight(double x, double R) {
    require(R >= 1.0, "sigma_weight: R must be >= 1");
    double y = x / R;
    return std::exp(-std::sqrt(1.0 + y * y));
}

}  // namespace gibbslab
