#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gibbslab/differences/differences.hpp"
#include "gibbslab/spectral/littlewood_paley.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

namespace {

void check_R(double R, const MassOptions& o) {
    require(std::isfinite(R) && R >= 1.0, "mass_MR: R must be >= 1");
    require(R >= 10.0 || o.allow_small_R, "mass_MR: R < 10 requires allow_small_R");
}

// Trapezoid of |w|^2 sigma_R over the points with |x| <= X.
MassValue integrate(const std::vector<double>& x, const std::vector<cplx>& w, double R, double X, double x_max,
                    const MassOptions& o) {
    MassValue m;
    m.x_max = x_max;
    double sup = 0, prev_x = 0, prev_f = 0;
    bool have_prev = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) > X + 1e-12) {
            have_prev = false;
            continue;
        }
        double a2 = std::norm(w[i]);
        sup = std::max(sup, a2);
        double f = a2 * sigma_weight(x[i], R);
        if (have_prev) m.value += 0.5 * (prev_f + f) * (x[i] - prev_x);
        prev_x = x[i];
        prev_f = f;
        have_prev = true;
    }
    // mass of sigma_R beyond |x| = X is about 2 R sigma_R(X)
    m.truncation_estimate = sup * 2.0 * R * sigma_weight(X, R);
    m.truncation_ok = m.truncation_estimate <= o.truncation_tolerance * m.value || m.truncation_estimate == 0.0;
    if (!m.truncation_ok && o.strict_truncation)
        throw NumericalFailure(fmt::format("mass_MR: truncation estimate {:.3g} exceeds {:.1g} of value {:.3g}; widen the window",
                                           m.truncation_estimate, o.truncation_tolerance, m.value));
    return m;
}

}  // namespace

MassValue mass_MR(const WindowPair& pair, double R, const MassOptions& opts) {
    check_R(R, opts);
    const double x_max = std::min(20.0 * R, 0.9 * pair.u_small.grid().half_period());
    const double X = std::min({x_max, -pair.window.a, pair.window.b});
    require(X > 0.0, "mass_MR: window does not contain the origin");
    auto big = evaluate_on_window(apply_cutoff(pair.u_big, R), pair);
    auto small = evaluate_on_window(apply_cutoff(pair.u_small, R), pair);
    for (std::size_t i = 0; i < big.size(); ++i) big[i] -= small[i];
    return integrate(pair.x, big, R, X, x_max, opts);
}

MassValue mass_MR(const TorusField& w, double R, const MassOptions& opts) {
    check_R(R, opts);
    const auto& g = w.grid();
    const double x_max = std::min(20.0 * R, 0.9 * g.half_period());
    TorusField pw = apply_cutoff(w, R);
    std::vector<double> x(g.M());
    for (std::size_t j = 0; j < g.M(); ++j) x[j] = g.x(j);
    return integrate(x, std::vector<cplx>(pw.values().begin(), pw.values().end()), R, x_max, x_max, opts);
}

double gronwall_exponent(double p) { return 2.0 * (p - 1.0) / (p + 3.0); }

double gronwall_envelope_at(double t, double mass_t0, const EnvelopeParams& e) {
    const double lg = std::log(e.T + e.R);
    return std::exp(e.A2 * std::pow(lg, gronwall_exponent(e.p)) * std::abs(t - e.t0)) *
           (mass_t0 + e.A2 * std::pow(e.R, -1.0 + 8.0 * e.delta) * std::pow(lg, e.p));
}

namespace {
double mass_at_t0(const MassTrace& tr, double t0) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < tr.t.size(); ++i)
        if (std::abs(tr.t[i] - t0) < std::abs(tr.t[best] - t0)) best = i;
    return tr.values[best];
}

void check_trace(const MassTrace& tr, const EnvelopeParams& e) {
    require(!tr.t.empty() && tr.t.size() == tr.values.size(), "gronwall_envelope: empty or malformed trace");
    require(e.A2 > 0 && e.R > 0 && e.T > 0, "gronwall_envelope: A2, R, T must be positive");
    const double eps = 1e-9 * std::max(1.0, e.T);
    require(tr.t.front() <= e.t0 + eps && tr.t.back() >= e.T - eps, "gronwall_envelope: trace does not cover [t0, T]");
}
}  // namespace

Envelope gronwall_envelope(const MassTrace& tr, const EnvelopeParams& e) {
    check_trace(tr, e);
    const double m0 = mass_at_t0(tr, e.t0);
    Envelope env;
    env.holds = true;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        double v = gronwall_envelope_at(tr.t[i], m0, e);
        env.values.push_back(v);
        env.max_ratio = std::max(env.max_ratio, tr.values[i] / v);
        if (tr.values[i] > v) env.holds = false;
    }
    return env;
}

double minimal_A2(const MassTrace& tr, EnvelopeParams e) {
    e.A2 = 1.0;
    check_trace(tr, e);
    auto ok = [&](double a) {
        e.A2 = a;
        return gronwall_envelope(tr, e).holds;
    };
    double lo = 0.0, hi = 1e-6;
    while (!ok(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NumericalFailure("minimal_A2: trace cannot be enveloped");
    }
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace gibbslab
