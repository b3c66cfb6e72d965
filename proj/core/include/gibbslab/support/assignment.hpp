#pragma once

#include <cstddef>
#include <vector>

namespace gibbslab {

// Dense row-major square cost matrix.
struct CostMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    CostMatrix() = default;
    explicit CostMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

struct Assignment {
    std::vector<std::size_t> column_of_row;
    double total_cost = 0.0;
};

// Exact minimum-cost perfect matching (shortest augmenting paths, O(n^3)).
Assignment solve_assignment(const CostMatrix& cost);

struct SinkhornResult {
    double cost = 0.0;          // transport cost of the entropic plan
    double regularization = 0.0;
    int iterations = 0;
    double marginal_error = 0.0;
};

// Log-domain Sinkhorn for uniform marginals.
SinkhornResult sinkhorn_uniform(const CostMatrix& cost, double regularization,
                                int max_iterations = 2000, double tolerance = 1e-9);

}  // namespace gibbslab
