#include "gibbslab/measures/wasserstein.hpp"

#include <algorithm>
#include <cmath>

#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/assignment.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

W1Result wasserstein_1(std::span<const TorusField> a, std::span<const TorusField> b, double theta,
                       std::size_t exact_limit) {
    require(!a.empty() && !b.empty(), "wasserstein_1: empty ensemble");
    require(theta > 0, "wasserstein_1: theta must be positive");
    const std::size_t m = std::min(a.size(), b.size());
    // common evaluation grid: the larger torus; the other side is extended periodically
    const TorusGrid& ga = a.front().grid();
    const TorusGrid& gb = b.front().grid();
    const TorusGrid common = ga.L() >= gb.L() ? ga : gb;
    auto lift = [&](std::span<const TorusField> e) {
        std::vector<std::vector<cplx>> out;
        out.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            require(e[i].grid() == e.front().grid(), "wasserstein_1: mixed grids within an ensemble");
            auto f = resample_periodic(e[i], common);
            out.emplace_back(f.values().begin(), f.values().end());
        }
        return out;
    };
    auto A = lift(a);
    auto B = lift(b);
    std::vector<double> wgt(common.M());
    for (std::size_t j = 0; j < common.M(); ++j) wgt[j] = std::exp(-theta * std::abs(common.x(j)));
    CostMatrix C(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            double d = 0;
            for (std::size_t j = 0; j < common.M(); ++j) d = std::max(d, wgt[j] * std::abs(A[i][j] - B[k][j]));
            C(i, k) = d;
        }
    W1Result r;
    r.m = m;
    if (m <= exact_limit) {
        r.value = solve_assignment(C).total_cost / static_cast<double>(m);
        r.exact = true;
        return r;
    }
    double scale = *std::max_element(C.data.begin(), C.data.end());
    double eps = std::max(scale, 1e-12) * 1e-3;
    auto s = sinkhorn_uniform(C, eps);
    r.value = s.cost;
    r.exact = false;
    r.regularization = eps;
    return r;
}

}  // namespace gibbslab
