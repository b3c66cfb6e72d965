#pragma once

#include <span>

#include "gibbslab/spectral/field.hpp"

namespace gibbslab {

struct MomentEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    bool reliable = true;  // false when the top 1% of samples carry > 50% of the sum
    double top_share = 0.0;
};

// E exp(beta |phi|_{L^{p+1}[-1,1]}^{p+1}), 0 < beta < 1/(p+1).
MomentEstimate exp_moment(std::span<const TorusField> members, double beta, double p);

}  // namespace gibbslab
