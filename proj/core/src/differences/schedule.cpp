#include <cmath>

#include <fmt/format.h>

#include "gibbslab/differences/differences.hpp"
#include "gibbslab/spectral/littlewood_paley.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

Interval IterationSchedule::leg(int j) const {
    require(j >= 0 && j <= J, "schedule: leg index out of range");
    if (J == 0) return {0.0, T};
    if (j == 0) return {0.0, 0.0};
    return {(j - 1) * tau, j * tau};
}

IterationSchedule iterated_schedule(double R, double T, int J, double A2, double A3, double tau0) {
    require(J >= 0, "iterated_schedule: J must be >= 0");
    require(R > 1.0 && T > 0.0 && tau0 > 0.0, "iterated_schedule: R > 1, T > 0, tau0 > 0 required");
    require(T <= R, "iterated_schedule: requires T <= R");
    IterationSchedule s;
    s.J = J;
    s.T = T;
    s.tau = J == 0 ? T : T / J;
    s.tau0 = tau0;
    s.A2 = A2;
    s.A3 = A3;
    if (s.tau > tau0) {
        auto need = static_cast<int>(std::ceil(T / tau0));
        throw ConfigError(fmt::format("iterated_schedule: tau = {:g} exceeds tau0 = {:g}; need J >= {}", s.tau, tau0, need));
    }
    s.radii.assign(static_cast<std::size_t>(J) + 1, 0.0);
    s.radii[static_cast<std::size_t>(J)] = R;
    for (int j = J; j >= 1; --j) s.radii[j - 1] = s.radii[j] * s.radii[j];
    for (int j = 0; j <= J; ++j) s.leg_bounds.push_back(std::pow(A3, j + 1) / std::sqrt(s.radii[j]));
    s.final_bound = std::pow(A3, J + 2) / std::sqrt(R);
    return s;
}

GoodEventResult good_event_check(std::span<const WindowPair> slices, const GoodEventParams& prm, double p) {
    require(prm.A0 > 0 && prm.delta > 0 && prm.delta < 0.5 && prm.T > 0 && prm.R > 0,
            "good_event_check: need A0 > 0, 0 < delta < 1/2, T, R > 0");
    GoodEventResult r;
    const double e1 = 2.0 / (p + 3.0);
    auto scan = [&](const TorusField& u) {
        const auto& g = u.grid();
        std::vector<double> w1(g.M()), w2(g.M());
        for (std::size_t j = 0; j < g.M(); ++j) {
            double lg = std::log(prm.T + prm.R + std::sqrt(1.0 + g.x(j) * g.x(j)));
            w1[j] = std::pow(lg, -e1);
            w2[j] = std::pow(lg, -0.5);
        }
        for (std::size_t j = 0; j < g.M(); ++j) r.sup_witness = std::max(r.sup_witness, w1[j] * std::abs(u[j]));
        for (int k = 0;; ++k) {
            Dyadic N = Dyadic::from_exponent(k);
            if (N.value() > g.nyquist()) break;
            TorusField hi = apply_projector(u, {ProjectorKind::HighPass, N});
            double s = 0;
            for (std::size_t j = 0; j < g.M(); ++j) s = std::max(s, w2[j] * std::abs(hi[j]));
            r.high_witness = std::max(r.high_witness, std::pow(N.value(), 0.5 - prm.delta) * s);
        }
    };
    for (const auto& sl : slices) {
        scan(sl.u_big);
        scan(sl.u_small);
    }
    r.pass = r.sup_witness <= prm.A0 && r.high_witness <= prm.A0;
    return r;
}

namespace {
// Delta u_big - Delta u_small and F(u_big) - F(u_small) pieces on the window
std::vector<cplx> laplacian_difference(const WindowPair& s) {
    auto a = evaluate_on_window(laplacian(s.u_big), s);
    auto b = evaluate_on_window(laplacian(s.u_small), s);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

std::vector<cplx> q_term(const WindowPair& s, double p) {
    auto q = q_coefficients(s, p);
    auto w = s.difference();
    std::vector<cplx> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = q.plus[i] * w[i] + q.minus[i] * std::conj(w[i]);
    return out;
}
}  // namespace

double residual_check(const WindowPair& before, const WindowPair& after, double p, double dt) {
    require(dt > 0.0, "residual_check: dt must be positive");
    require(before.x == after.x, "residual_check: slices use different evaluation points");
    auto w0 = before.difference();
    auto w1 = after.difference();
    auto l0 = laplacian_difference(before);
    auto l1 = laplacian_difference(after);
    auto q0 = q_term(before, p);
    auto q1 = q_term(after, p);
    const cplx I(0.0, 1.0);
    double r = 0;
    for (std::size_t i = 0; i < w0.size(); ++i) {
        cplx res = I * (w1[i] - w0[i]) / dt + 0.5 * (l0[i] + l1[i]) - 0.5 * (q0[i] + q1[i]);
        r = std::max(r, std::abs(res));
    }
    return r;
}

double residual_check(std::span<const WindowPair> slices, double p, double dt) {
    require(slices.size() >= 2, "residual_check: needs at least two time slices");
    double r = 0;
    for (std::size_t i = 0; i + 1 < slices.size(); ++i) r = std::max(r, residual_check(slices[i], slices[i + 1], p, dt));
    return r;
}

}  // namespace gibbslab
