#include "gibbslab/support/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

Assignment solve_assignment(const CostMatrix& cost) {
    const std::size_t n = cost.n;
    require(n > 0 && cost.data.size() == n * n, "assignment: bad cost matrix");
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; p[j] is the row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            std::size_t i0 = p[j0], j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    Assignment a;
    a.column_of_row.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) a.column_of_row[p[j] - 1] = j - 1;
    for (std::size_t i = 0; i < n; ++i) a.total_cost += cost(i, a.column_of_row[i]);
    return a;
}

namespace {
double logsumexp(const double* v, std::size_t n, std::size_t stride) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) m = std::max(m, v[k * stride]);
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) s += std::exp(v[k * stride] - m);
    return m + std::log(s);
}
}  // namespace

SinkhornResult sinkhorn_uniform(const CostMatrix& cost, double eps, int max_iterations,
                                double tolerance) {
    const std::size_t n = cost.n;
    require(n > 0, "sinkhorn: empty cost");
    require(eps > 0, "sinkhorn: regularization must be positive");
    const double loga = -std::log(static_cast<double>(n));
    std::vector<double> f(n, 0.0), g(n, 0.0), buf(n);
    SinkhornResult r;
    r.regularization = eps;
    for (int it = 0; it < max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) buf[j] = (g[j] - cost(i, j)) / eps;
            f[i] = eps * (loga - logsumexp(buf.data(), n, 1));
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) buf[i] = (f[i] - cost(i, j)) / eps;
            g[j] = eps * (loga - logsumexp(buf.data(), n, 1));
        }
        // row marginal error after the column update
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += std::exp((f[i] + g[j] - cost(i, j)) / eps);
            err += std::abs(s - 1.0 / static_cast<double>(n));
        }
        r.iterations = it + 1;
        r.marginal_error = err;
        if (err < tolerance) break;
    }
    double c = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            c += std::exp((f[i] + g[j] - cost(i, j)) / eps) * cost(i, j);
    r.cost = c;
    return r;
}

}  // namespace gibbslab
