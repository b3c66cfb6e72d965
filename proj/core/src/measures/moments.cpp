#include "gibbslab/measures/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/stats.hpp"

namespace gibbslab {

MomentEstimate exp_moment(std::span<const TorusField> members, double beta, double p) {
    require(members.size() >= 2, "exp_moment: need at least two members");
    require(beta > 0.0 && beta < 1.0 / (p + 1.0), "exp_moment: beta must lie in (0, 1/(p+1))");
    std::vector<double> v;
    v.reserve(members.size());
    for (const auto& m : members) {
        double n = norm(m, LpNorm{p + 1.0, {-1.0, 1.0}});
        double e = std::exp(beta * std::pow(n, p + 1.0));
        if (!std::isfinite(e)) throw NumericalFailure("exp_moment: overflow");
        v.push_back(e);
    }
    MomentEstimate r;
    r.value = stats::mean(v);
    r.stderr_ = stats::standard_error(v);
    std::vector<double> s = v;
    std::sort(s.begin(), s.end(), std::greater<>());
    std::size_t top = std::max<std::size_t>(1, s.size() / 100);
    double total = 0, head = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        total += s[i];
        if (i < top) head += s[i];
    }
    r.top_share = head / total;
    r.reliable = r.top_share <= 0.5;
    return r;
}

}  // namespace gibbslab
