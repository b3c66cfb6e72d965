#pragma once

#include <span>
#include <vector>

#include "gibbslab/spectral/field.hpp"
#include "gibbslab/spectral/norms.hpp"

namespace gibbslab {

// u_L on T_L and u_{L'} on a smaller torus, evaluated at common points of a
// window inside the smaller fundamental domain. Evaluation points are the
// small-grid nodes in the window.
struct WindowPair {
    TorusField u_big;
    TorusField u_small;
    Interval window;
    std::vector<double> x;
    std::vector<cplx> big_vals;
    std::vector<cplx> small_vals;

    std::vector<cplx> difference() const;  // w = u_big - u_small on x
};

WindowPair make_window_pair(const TorusField& u_big, const TorusField& u_small, Interval window);

// Values of `field` (one of the pair's tori) at the pair's evaluation points.
std::vector<cplx> evaluate_on_window(const TorusField& field, const WindowPair& pair);

// F(z) = |z|^{p-1} z, pointwise
cplx power_nonlinearity(cplx z, double p);

struct QCoefficients {
    std::vector<cplx> plus;   // int_0^1 d_z F(u_s + theta w) d theta
    std::vector<cplx> minus;  // int_0^1 d_zbar F(u_s + theta w) d theta
};

QCoefficients q_coefficients(const WindowPair& pair, double p);
// sup |Q+ w + Q- conj(w) - (F(u_big) - F(u_small))| on the window
double factorization_residual(const WindowPair& pair, const QCoefficients& q, double p);

struct MassOptions {
    bool allow_small_R = false;       // R < 10
    bool strict_truncation = true;    // throw when the tail estimate is too large
    double truncation_tolerance = 1e-6;
};

struct MassValue {
    double value = 0.0;
    double truncation_estimate = 0.0;
    double x_max = 0.0;
    bool truncation_ok = true;
};

// int |P_{<=R} w|^2 sigma_R dx over [-X_max, X_max], X_max = min(20 R, 0.9 pi L_small),
// P_{<=R} applied on each torus before differencing.
MassValue mass_MR(const WindowPair& pair, double R, const MassOptions& opts = {});
// Single-field variant over its own fundamental domain.
MassValue mass_MR(const TorusField& w, double R, const MassOptions& opts = {});

struct MassTrace {
    double R = 0.0;
    std::vector<double> t;
    std::vector<double> values;
    std::vector<bool> good_event;  // optional, same length as t when present
};

struct EnvelopeParams {
    double A2 = 1.0;
    double t0 = 0.0;
    double T = 1.0;
    double R = 16.0;
    double delta = 0.05;
    double p = 3.0;
};

struct Envelope {
    std::vector<double> values;
    bool holds = false;
    double max_ratio = 0.0;  // max trace / envelope
};

double gronwall_exponent(double p);  // 2(p-1)/(p+3)
double gronwall_envelope_at(double t, double mass_t0, const EnvelopeParams& e);
Envelope gronwall_envelope(const MassTrace& trace, const EnvelopeParams& e);
// Smallest A2 for which the trace lies below the envelope (bisection).
double minimal_A2(const MassTrace& trace, EnvelopeParams e);

struct IterationSchedule {
    int J = 0;
    double T = 0.0;
    double tau = 0.0;
    double tau0 = 0.0;
    double A2 = 0.0;
    double A3 = 0.0;
    std::vector<double> radii;       // radii[j] = R_j, j = 0..J; R_J = R
    std::vector<double> leg_bounds;  // A3^{j+1} R_j^{-1/2}
    double final_bound = 0.0;        // A3^{J+2} R^{-1/2}

    // [t_{j-1}, t_j] with t_{-1} = t_0 = 0; the whole of [0, T] when J = 0
    Interval leg(int j) const;
};

IterationSchedule iterated_schedule(double R, double T, int J, double A2, double A3, double tau0);

struct GoodEventParams {
    double A0 = 1.0;
    double delta = 0.05;
    double T = 1.0;
    double R = 16.0;
};

struct GoodEventResult {
    bool pass = true;
    double sup_witness = 0.0;   // sup log(T+R+<x>)^{-2/(p+3)} |u|
    double high_witness = 0.0;  // sup_N N^{1/2-delta} sup log(T+R+<x>)^{-1/2} |P_{>N} u|
};

// Both fields of every supplied time slice, over their full fundamental domains.
GoodEventResult good_event_check(std::span<const WindowPair> slices, const GoodEventParams& params, double p);

// sup over the window of |i d_t w + Delta w - Q+ w - Q- conj(w)| between two
// slices dt apart (midpoint rule, second order in dt).
double residual_check(const WindowPair& before, const WindowPair& after, double p, double dt);
double residual_check(std::span<const WindowPair> slices, double p, double dt);

}  // namespace gibbslab
