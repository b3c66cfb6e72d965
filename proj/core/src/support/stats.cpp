#include "gibbslab/support/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "gibbslab/support/error.hpp"

namespace gibbslab::stats {

double mean(std::span<const double> x) {
    require(!x.empty(), "mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    require(x.size() >= 2, "variance needs at least two values");
    double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double standard_error(std::span<const double> x) {
    return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

double quantile_sorted(std::span<const double> s, double q) {
    require(!s.empty(), "quantile of empty sample");
    require(q >= 0.0 && q <= 1.0, "quantile level outside [0,1]");
    double h = q * static_cast<double>(s.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double quantile(std::span<const double> x, double q) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, q);
}

double median(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    return quantile_sorted(x, 0.5);
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) {
        // Q(lambda) = 1 - sqrt(2 pi)/lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))
        double s = 0.0;
        for (int k = 1; k <= 50; ++k) {
            double a = (2.0 * k - 1.0) * std::numbers::pi / lambda;
            s += std::exp(-a * a / 8.0);
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 200; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    require(!a.empty() && !b.empty(), "KS test needs non-empty samples");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    const double ne = n * m / (n + m);
    const double sq = std::sqrt(ne);
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
    return r;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    require(trials > 0, "Wilson interval needs at least one trial");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    // the endpoints are exact at the boundary counts; the formula leaves rounding there
    const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), "linear_fit: size mismatch");
    require(x.size() >= 2, "linear_fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = mean(x), my = mean(y);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0, "linear_fit: degenerate abscissae");
    LinearFit f;
    f.n = x.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (x.size() > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        double s2 = rss / (n - 2);
        f.slope_stderr = std::sqrt(s2 / sxx);
        f.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    }
    return f;
}

double LinearFit::slope_halfwidth(double level) const {
    if (n <= 2) return std::numeric_limits<double>::infinity();
    boost::math::students_t dist(static_cast<double>(n - 2));
    double t = boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
    return t * slope_stderr;
}

}  // namespace gibbslab::stats
