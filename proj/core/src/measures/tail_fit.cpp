#include "gibbslab/measures/tail_fit.hpp"

#include <algorithm>
#include <cmath>

#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

namespace {
// Standard error of an empirical quantile from the spread of the order
// statistics that bracket it at +-1.96 binomial standard deviations.
double order_stat_stderr(const std::vector<double>& sorted, double q) {
    const double n = static_cast<double>(sorted.size());
    const double sd = std::sqrt(n * q * (1 - q));
    auto clampi = [&](double k) {
        return static_cast<std::size_t>(std::clamp(k, 0.0, n - 1));
    };
    double lo = sorted[clampi(std::floor(n * q - 1.96 * sd))];
    double hi = sorted[clampi(std::ceil(n * q + 1.96 * sd))];
    return (hi - lo) / (2 * 1.96);
}
}  // namespace

TailFit tail_fit(std::span<const TorusField> members, std::span<const double> R,
                 std::span<const double> levels) {
    require(members.size() >= 200, "tail_fit: ensemble needs at least 200 members");
    require(R.size() >= 3, "tail_fit: need at least 3 radii");
    require(!levels.empty(), "tail_fit: need at least one quantile level");
    const auto& g = members.front().grid();
    for (double r : R) {
        require(r > 1.0, "tail_fit: radii must exceed 1");
        require(r <= g.half_period() / 2.0 + 1e-12, "tail_fit: radius exceeds pi L / 2");
    }
    TailFit out;
    out.R.assign(R.begin(), R.end());
    std::vector<std::vector<double>> sorted(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) {
        sorted[i].reserve(members.size());
        for (const auto& m : members) sorted[i].push_back(norm(m, SupNorm{{-R[i], R[i]}}));
        std::sort(sorted[i].begin(), sorted[i].end());
    }
    std::vector<double> lx;
    for (double r : R) lx.push_back(std::log(std::log(r)));
    std::vector<double> slopes;
    for (double q : levels) {
        require(q > 0 && q < 1, "tail_fit: quantile level outside (0, 1)");
        TailFitLevel lv;
        lv.q = q;
        std::vector<double> ly;
        for (std::size_t i = 0; i < R.size(); ++i) {
            double v = stats::quantile_sorted(sorted[i], q);
            lv.quantiles.push_back(v);
            lv.stderrs.push_back(order_stat_stderr(sorted[i], q));
            ly.push_back(std::log(v));
        }
        lv.fit = stats::linear_fit(lx, ly);
        slopes.push_back(lv.fit.slope);
        out.halfwidth = std::max(out.halfwidth, lv.fit.slope_halfwidth(0.95));
        out.levels.push_back(std::move(lv));
    }
    out.gamma = stats::median(slopes);
    return out;
}

TailFit tail_fit(std::span<const TorusField> members, std::span<const double> R) {
    const double levels[] = {0.5, 0.9};
    return tail_fit(members, R, levels);
}

}  // namespace gibbslab
