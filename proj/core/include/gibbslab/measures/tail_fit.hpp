#pragma once

#include <span>
#include <vector>

#include "gibbslab/spectral/field.hpp"
#include "gibbslab/support/stats.hpp"

namespace gibbslab {

struct TailFitLevel {
    double q = 0.5;
    std::vector<double> quantiles;  // per R
    std::vector<double> stderrs;    // order-statistic standard errors
    stats::LinearFit fit;           // log quantile against log log R
};

struct TailFit {
    std::vector<double> R;
    std::vector<TailFitLevel> levels;
    double gamma = 0.0;      // median slope over levels
    double halfwidth = 0.0;  // widest 95% slope half-width over levels
};

// Growth exponent of sup_{|x|<=R} |phi(x)| in log R.
TailFit tail_fit(std::span<const TorusField> members, std::span<const double> R,
                 std::span<const double> levels);
TailFit tail_fit(std::span<const TorusField> members, std::span<const double> R);

}  // namespace gibbslab
