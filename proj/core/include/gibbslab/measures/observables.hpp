#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/spectral/field.hpp"

namespace gibbslab {

struct Observable {
    std::string name;
    std::function<double(const TorusField&)> eval;
};

// Re u(0), |u(0)|, |u|_{L^2[-1,1]}, |u|_{L^inf[-1,1]}, |u|_{L^q[-1,1]}
Observable obs_re_origin();
Observable obs_abs_origin();
Observable obs_lp_unit(double q);

std::vector<double> evaluate_observable(const Observable& o, std::span<const TorusField> members);

}  // namespace gibbslab
