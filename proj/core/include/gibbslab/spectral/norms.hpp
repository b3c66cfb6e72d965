#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "gibbslab/spectral/field.hpp"

namespace gibbslab {

struct Interval {
    double a = 0.0;
    double b = 0.0;
    double width() const noexcept { return b - a; }
    bool contains(double x) const noexcept { return a <= x && x <= b; }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpNorm { double p; Interval I; };        // p may be kInfinity
struct LpLocNorm { double p; Interval I; };     // sup_x0 |u|_{L^p(I cap [x0-1, x0+1])}
struct SupNorm { Interval I; };                 // C^0
struct HolderNorm { double alpha; Interval I; };// C^0 + [u]_alpha over |x-y| <= 1
struct WeightedSupNorm { double theta; };       // sup e^{-theta|x|} |u| on the fundamental domain

using NormSpec = std::variant<LpNorm, LpLocNorm, SupNorm, HolderNorm, WeightedSupNorm>;

double norm(const TorusField& u, const NormSpec& spec);

// Grid samples of u on I: interior nodes plus linearly interpolated endpoints.
struct Restriction {
    std::vector<double> x;
    std::vector<cplx> v;
};
Restriction restrict_to(const TorusField& u, Interval I);

double lp_on_samples(const Restriction& r, double p);
double holder_seminorm_on_samples(const Restriction& r, double alpha);

double ce_theta(const TorusField& u, double theta);

// CE^theta distance between fields that may live on different tori: the
// smaller torus is extended periodically over the larger fundamental domain.
double ce_theta_distance(const TorusField& a, const TorusField& b, double theta);

// sigma_R(x) = exp(-<x/R>), <y> = sqrt(1 + y^2)
double sigma_weight(double x, double R);

}  // namespace gibbslab
