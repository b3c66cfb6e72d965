#include "gibbslab/measures/brascamp_lieb.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    require(n >= 1 && n <= 400, "gauss_hermite: node count out of range");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        w[i] = std::sqrt(std::numbers::pi) * v0 * v0;
    }
    return {x, w};
}

namespace {

struct Sums {
    double lhs = 0, rhs = 0;
};

// Whitened coordinates y, phi = LinvT y, Gaussian weight exp(-|y|^2). The
// basis is rotated so that <f, phi> = |g| y_1. V is even, so the y_1 < 0 half
// mirrors the y_1 > 0 half; y_1 runs over [0, inf) with exp_sinh, which also
// absorbs the |y_1|^q kink, and the remaining axes use the trapezoid rule.
Sums integrate(const Eigen::MatrixXd& LinvT, const std::function<double(const Eigen::VectorXd&)>& V,
               const Eigen::VectorXd& f, const BlForm& form, int nodes) {
    const int n = static_cast<int>(f.size());
    const Eigen::VectorXd g = LinvT.transpose() * f;
    const double gn = g.norm();
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
    if (gn > 0) {
        Eigen::MatrixXd seed = Eigen::MatrixXd::Identity(n, n);
        seed.col(0) = g / gn;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
        basis = qr.householderQ();
        if (basis.col(0).dot(g) < 0) basis.col(0) *= -1;
    }
    const Eigen::MatrixXd map = LinvT * basis;

    constexpr double kBox = 9.0;  // exp(-81) is below double resolution
    const int m = n == 1 ? 1 : nodes;
    const double h = n == 1 ? 1.0 : 2.0 * kBox / (m - 1);
    // log of the test function, so that exp(-y_1^2) can absorb it before overflow
    auto log_h = [&](double lin) {
        return std::visit(
            [&](const auto& fm) -> double {
                using T = std::decay_t<decltype(fm)>;
                if constexpr (std::is_same_v<T, BlMoment>)
                    return fm.q * std::log(std::abs(lin));
                else
                    return fm.beta * lin * lin;
            },
            form);
    };
    // inner sums over the trailing axes at fixed y_1: {num_mu, den_mu, num_g, den_g}
    auto slice = [&](double y1) {
        std::array<double, 4> s{0, 0, 0, 0};
        if (y1 > 40.0) return s;  // exp(-1600) underflows; avoids inf - inf far out
        Eigen::VectorXd y(n), phi(n);
        std::vector<int> idx(std::max(n - 1, 0), 0);
        const double g1 = std::exp(-y1 * y1), g1h = std::exp(-y1 * y1 + log_h(gn * y1));
        while (true) {
            y(0) = y1;
            double r2 = 0;
            for (int d = 1; d < n; ++d) {
                y(d) = -kBox + idx[d - 1] * h;
                r2 += y(d) * y(d);
            }
            phi.noalias() = map * y;
            const double wr = std::exp(-r2);
            const double ev = std::exp(-V(phi));
            s[0] += g1h * wr * ev;
            s[1] += g1 * wr * ev;
            s[2] += g1h * wr;
            s[3] += g1 * wr;
            int d = 0;
            while (d < n - 1 && ++idx[d] == m) idx[d++] = 0;
            if (d == n - 1) break;
        }
        return s;
    };
    boost::math::quadrature::exp_sinh<double> q;
    std::array<double, 4> tot{};
    for (int k = 0; k < 4; ++k) tot[k] = q.integrate([&](double y1) { return slice(y1)[k]; }, 1e-13);
    return {tot[0] / tot[1], tot[2] / tot[3]};
}

}  // namespace

BlResult brascamp_lieb_check(const Eigen::MatrixXd& A, const std::function<double(const Eigen::VectorXd&)>& V,
                             const Eigen::VectorXd& f, const BlForm& form, int nodes, int check_nodes,
                             double check_tol) {
    const auto n = A.rows();
    require(n >= 1 && n <= 4, "brascamp_lieb_check: dimension must be 1..4");
    require(A.cols() == n && f.size() == n, "brascamp_lieb_check: shape mismatch");
    require((A - A.transpose()).norm() <= 1e-12 * A.norm(), "brascamp_lieb_check: A must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    require(llt.info() == Eigen::Success, "brascamp_lieb_check: A must be positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd LinvT = L.transpose().inverse();
    if (const auto* e = std::get_if<BlExponential>(&form)) {
        double s2 = f.dot(A.ldlt().solve(f)) / 2.0;
        require(e->beta > 0 && 2.0 * e->beta * s2 < 0.9,
                "brascamp_lieb_check: exponential form needs 2 beta Var<f,phi> < 0.9");
    } else {
        require(std::get<BlMoment>(form).q > 0, "brascamp_lieb_check: moment order must be positive");
    }
    Sums a = integrate(LinvT, V, f, form, nodes);
    Sums b = integrate(LinvT, V, f, form, check_nodes);
    BlResult r;
    r.lhs = a.lhs;
    r.rhs = a.rhs;
    r.richardson_gap = std::max(std::abs(a.lhs - b.lhs) / std::abs(b.lhs), std::abs(a.rhs - b.rhs) / std::abs(b.rhs));
    if (!(r.richardson_gap <= check_tol))
        throw NumericalFailure("brascamp_lieb_check: quadrature refinement disagrees beyond tolerance");
    return r;
}

}  // namespace gibbslab
