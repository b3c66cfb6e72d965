#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gibbslab {

// Nodes and weights for int f(x) e^{-x^2} dx (Golub-Welsch).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

struct BlMoment { double q; };             // E |<f, phi>|^q
struct BlExponential { double beta; };     // E exp(beta <f, phi>^2)
using BlForm = std::variant<BlMoment, BlExponential>;

struct BlResult {
    double lhs = 0.0;  // under exp(-<phi, A phi> - V(phi))
    double rhs = 0.0;  // under exp(-<phi, A phi>)
    double richardson_gap = 0.0;
    bool holds(double rel_tol = 1e-6) const { return lhs <= rhs * (1.0 + rel_tol); }
};

// Brascamp-Lieb comparison for even convex V on R^n, n <= 4. The direction
// of f is integrated with exp_sinh, the orthogonal axes with a trapezoid rule
// of `nodes` points per axis; a rerun with check_nodes bounds the error.
BlResult brascamp_lieb_check(const Eigen::MatrixXd& A,
                             const std::function<double(const Eigen::VectorXd&)>& V,
                             const Eigen::VectorXd& f, const BlForm& form, int nodes = 64,
                             int check_nodes = 96, double check_tol = 1e-4);

}  // namespace gibbslab
