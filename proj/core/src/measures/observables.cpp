#include "gibbslab/measures/observables.hpp"

#include <fmt/format.h>

#include "gibbslab/spectral/norms.hpp"

namespace gibbslab {

Observable obs_re_origin() {
    return {"re_u0", [](const TorusField& u) { return u.at_origin().real(); }};
}

Observable obs_abs_origin() {
    return {"abs_u0", [](const TorusField& u) { return std::abs(u.at_origin()); }};
}

Observable obs_lp_unit(double q) {
    std::string name = std::isinf(q) ? "linf_unit" : fmt::format("l{:g}_unit", q);
    return {name, [q](const TorusField& u) { return norm(u, LpNorm{q, {-1.0, 1.0}}); }};
}

std::vector<double> evaluate_observable(const Observable& o, std::span<const TorusField> members) {
    std::vector<double> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(o.eval(m));
    return out;
}

}  // namespace gibbslab
