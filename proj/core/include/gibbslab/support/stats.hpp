#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gibbslab::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double standard_error(std::span<const double> x);

// Type-7 (linear interpolation) empirical quantile; q in [0, 1].
double quantile(std::span<const double> x, double q);
double quantile_sorted(std::span<const double> sorted, double q);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic Kolmogorov distribution
// and Stephens' small-sample correction.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
double kolmogorov_survival(double lambda);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    std::size_t n = 0;
    // two-sided confidence half-width for the slope at the given level
    double slope_halfwidth(double level = 0.95) const;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> x);

}  // namespace gibbslab::stats
