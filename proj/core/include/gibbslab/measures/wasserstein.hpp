#pragma once

#include <span>

#include "gibbslab/spectral/field.hpp"

namespace gibbslab {

struct W1Result {
    double value = 0.0;
    bool exact = true;
    double regularization = 0.0;  // Sinkhorn epsilon when not exact
    std::size_t m = 0;
};

// Empirical W_1 under the CE^theta metric. Ensembles of unequal size are
// truncated to the smaller size; exact assignment up to `exact_limit`.
W1Result wasserstein_1(std::span<const TorusField> a, std::span<const TorusField> b, double theta,
                       std::size_t exact_limit = 256);

}  // namespace gibbslab
