#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "gibbslab/differences/differences.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/nls/nls.hpp"
#include "gibbslab/spectral/littlewood_paley.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

TorusField smooth_gff(const TorusGrid& g, std::uint64_t seed, double t = 0.05) {
    Rng r(seed);
    return heat_flow(sample_gff(g, r), t);
}

TEST(WindowPair, CommonPlaneWaveCancels) {
    TorusGrid big = make_grid(20, 640), small = make_grid(10, 320);
    auto f = [](double x) { return 0.7 * std::exp(I * 0.3 * x); };  // 0.3 is in Z_10 and Z_20
    auto p = make_window_pair(TorusField::from_function(big, f), TorusField::from_function(small, f), {-20, 20});
    for (auto w : p.difference()) EXPECT_LT(std::abs(w), 1e-12);
}

TEST(WindowPair, NodesReproduceStoredValues) {
    TorusGrid big = make_grid(20, 640), small = make_grid(10, 320);
    Rng r(1);
    TorusField ub = sample_gff(big, r), us = sample_gff(small, r);
    auto p = make_window_pair(ub, us, {-25, 25});
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        std::size_t jb = static_cast<std::size_t>(std::llround((p.x[i] + big.half_period()) / big.dx()));
        EXPECT_LT(std::abs(p.big_vals[i] - ub[jb]), 1e-12);
        EXPECT_EQ(evaluate_on_window(us, p)[i], p.small_vals[i]);
    }
    EXPECT_THROW(make_window_pair(ub, us, {-40, 40}), ConfigError);
}

TEST(QCoefficients, CoincidentFieldsCubic) {
    TorusGrid g = make_grid(4, 128);
    Rng r(2);
    TorusField u = sample_gff(g, r);
    auto p = make_window_pair(u, u, {-10, 10});
    auto q = q_coefficients(p, 3);
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        cplx z = p.small_vals[i];
        EXPECT_LT(std::abs(q.plus[i] - 2.0 * std::norm(z)), 1e-12);
        EXPECT_LT(std::abs(q.minus[i] - z * z), 1e-12);
    }
    EXPECT_EQ(factorization_residual(p, q, 3), 0.0);
}

TEST(QCoefficients, FactorizationIdentity) {
    TorusGrid big = make_grid(20, 640), small = make_grid(10, 320);
    for (double p : {3.0, 5.0, 4.0}) {
        Rng r(static_cast<std::uint64_t>(p * 10));
        auto pair = make_window_pair(sample_gff(big, r), sample_gff(small, r), {-30, 30});
        auto q = q_coefficients(pair, p);
        double scale = 0;
        for (std::size_t i = 0; i < pair.x.size(); ++i)
            scale = std::max(scale, std::abs(power_nonlinearity(pair.big_vals[i], p)));
        double tol = (p == 4.0 ? 1e-9 : 1e-10) * std::max(1.0, scale);
        EXPECT_LT(factorization_residual(pair, q, p), tol) << "p = " << p;
    }
}

TEST(MassMR, ZeroAndConstant) {
    TorusGrid g = make_grid(80, 2048);
    EXPECT_EQ(mass_MR(TorusField(g), 10).value, 0.0);
    const cplx c(0.6, -0.8);
    TorusField w(g, std::vector<cplx>(g.M(), c));
    // oracle: I0 = int exp(-<y>) dy by quadrature, equal to 2 K_1(1)
    boost::math::quadrature::exp_sinh<double> q;
    const double I0 = 2.0 * q.integrate([](double y) { return std::exp(-std::sqrt(1 + y * y)); });
    EXPECT_NEAR(I0, 2.0 * boost::math::cyl_bessel_k(1, 1.0), 1e-12);
    for (double R : {10.0, 12.0}) {
        auto m = mass_MR(w, R);
        EXPECT_TRUE(m.truncation_ok);
        EXPECT_NEAR(m.value, std::norm(c) * R * I0, 1e-6 * m.value) << "R = " << R;
    }
}

TEST(MassMR, IncreasesWithR) {
    TorusGrid g = make_grid(40, 2048);
    auto w = TorusField::from_function(g, [](double x) { return cplx(std::exp(-x * x / 4), 0); });
    MassOptions o;
    o.strict_truncation = false;
    EXPECT_LT(mass_MR(w, 10, o).value, mass_MR(w, 20, o).value);
}

TEST(MassMR, SmallRNeedsFlag) {
    TorusGrid g = make_grid(10, 256);
    EXPECT_THROW(mass_MR(TorusField(g), 4), ConfigError);
    MassOptions o;
    o.allow_small_R = true;
    EXPECT_EQ(mass_MR(TorusField(g), 4, o).value, 0.0);
}

TEST(MassMR, TruncationGuard) {
    TorusGrid g = make_grid(4, 256);  // X_max = 0.9 * 4 pi, far below 20 R
    TorusField w(g, std::vector<cplx>(g.M(), 1.0));
    EXPECT_THROW(mass_MR(w, 10), NumericalFailure);
    MassOptions o;
    o.strict_truncation = false;
    EXPECT_FALSE(mass_MR(w, 10, o).truncation_ok);
}

TEST(Gronwall, Exponents) {
    EXPECT_DOUBLE_EQ(gronwall_exponent(5), 1.0);
    EXPECT_DOUBLE_EQ(gronwall_exponent(3), 2.0 / 3.0);
}

TEST(Gronwall, EnvelopeAtStartAndMinimalA2) {
    EnvelopeParams e{0.5, 0.0, 0.5, 16, 0.05, 3};
    const double m0 = 0.02;
    const double start = m0 + 0.5 * std::pow(16.0, -1 + 8 * 0.05) * std::pow(std::log(16.5), 3);
    EXPECT_NEAR(gronwall_envelope_at(0.0, m0, e), start, 1e-14);
    MassTrace tr{16, {0, 0.25, 0.5}, {m0, 0.5, 3.0}, {}};
    Envelope env = gronwall_envelope(tr, e);
    EXPECT_GE(env.values[0], tr.values[0]);
    double a = minimal_A2(tr, e);
    e.A2 = a;
    EXPECT_TRUE(gronwall_envelope(tr, e).holds);
    e.A2 = a * 0.99;
    EXPECT_FALSE(gronwall_envelope(tr, e).holds);
    EXPECT_THROW(gronwall_envelope(MassTrace{16, {}, {}, {}}, e), ConfigError);
}

TEST(Schedule, RadiiSquareBackwards) {
    auto s = iterated_schedule(10, 0.5, 3, 1, 2, 0.25);
    ASSERT_EQ(s.radii.size(), 4u);
    EXPECT_DOUBLE_EQ(s.radii[3], 10);
    EXPECT_DOUBLE_EQ(s.radii[2], 100);
    EXPECT_DOUBLE_EQ(s.radii[1], 1e4);
    EXPECT_DOUBLE_EQ(s.radii[0], 1e8);
    EXPECT_DOUBLE_EQ(s.final_bound, std::pow(2.0, 5) / std::sqrt(10.0));
    for (int j = 0; j <= 3; ++j) EXPECT_DOUBLE_EQ(s.leg_bounds[j], std::pow(2.0, j + 1) / std::sqrt(s.radii[j]));
}

TEST(Schedule, ZeroLegsAndRefusals) {
    auto s = iterated_schedule(10, 0.2, 0, 1, 2, 0.25);
    ASSERT_EQ(s.radii.size(), 1u);
    EXPECT_EQ(s.leg(0).a, 0.0);
    EXPECT_EQ(s.leg(0).b, 0.2);
    EXPECT_THROW(iterated_schedule(10, 1.0, 2, 1, 2, 0.25), ConfigError);  // tau > tau0
    EXPECT_THROW(iterated_schedule(10, 20, 200, 1, 2, 0.25), ConfigError);  // T > R
}

TEST(GoodEvent, ZeroAndConstantFields) {
    TorusGrid big = make_grid(20, 640), small = make_grid(10, 320);
    GoodEventParams prm{1.0, 0.05, 1.0, 16};
    std::vector<WindowPair> zero{make_window_pair(TorusField(big), TorusField(small), {-5, 5})};
    auto r0 = good_event_check(zero, prm, 3);
    EXPECT_TRUE(r0.pass);
    EXPECT_EQ(r0.sup_witness, 0.0);
    EXPECT_EQ(r0.high_witness, 0.0);
    const double c = 2.0;
    std::vector<WindowPair> cst{make_window_pair(TorusField(big, std::vector<cplx>(640, c)),
                                                 TorusField(small, std::vector<cplx>(320, c)), {-5, 5})};
    auto r = good_event_check(cst, prm, 3);
    EXPECT_NEAR(r.sup_witness, c / std::pow(std::log(1.0 + 16 + 1), 2.0 / 6.0), 1e-12);
    EXPECT_LT(r.high_witness, 1e-12);
}

TEST(Residual, ZeroAndCoincidentPlaneWaves) {
    TorusGrid big = make_grid(20, 640), small = make_grid(10, 320);
    std::vector<WindowPair> zero(2, make_window_pair(TorusField(big), TorusField(small), {-5, 5}));
    EXPECT_EQ(residual_check(zero, 3, 0.01), 0.0);
    auto wave = [](double t) { return [t](double x) { return std::exp(I * (0.5 * x - (0.25 + 1.0) * t)); }; };
    std::vector<WindowPair> w;
    for (double t : {0.0, 0.01})
        w.push_back(make_window_pair(TorusField::from_function(big, wave(t)), TorusField::from_function(small, wave(t)), {-5, 5}));
    EXPECT_LT(residual_check(w, 3, 0.01), 1e-8);
    EXPECT_THROW(residual_check(std::span(w).first(1), 3, 0.01), ConfigError);
}

TEST(Residual, SecondOrderInSliceSpacing) {
    TorusGrid big = make_grid(8, 256), small = make_grid(4, 128);
    TorusField ub = smooth_gff(big, 3, 0.3), us = smooth_gff(small, 4, 0.3);
    NlsConfig cfg{3, 1e-5, 1, 1.0};
    auto slices = [&](double spacing) {
        TorusField b = ub, s = us;
        NlsSolver sb(big, cfg), ss(small, cfg);
        std::vector<WindowPair> out{make_window_pair(b, s, {-8, 8})};
        sb.advance(b, spacing);
        ss.advance(s, spacing);
        out.push_back(make_window_pair(b, s, {-8, 8}));
        return out;
    };
    double r1 = residual_check(slices(0.02), 3, 0.02);
    double r2 = residual_check(slices(0.01), 3, 0.01);
    EXPECT_NEAR(r1 / r2, 4.0, 0.6);
}

}  // namespace
}  // namespace gibbslab
