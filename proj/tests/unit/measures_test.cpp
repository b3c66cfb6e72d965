#include <cmath>
#include <filesystem>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "gibbslab/measures/brascamp_lieb.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/measures/gibbs.hpp"
#include "gibbslab/measures/moments.hpp"
#include "gibbslab/measures/observables.hpp"
#include "gibbslab/measures/tail_fit.hpp"
#include "gibbslab/measures/wasserstein.hpp"
#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/stats.hpp"

namespace gibbslab {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<TorusField> gff_ensemble(const TorusGrid& g, std::size_t n, std::uint64_t seed) {
    std::vector<TorusField> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rng r(seed, i);
        out.push_back(sample_gff(g, r));
    }
    return out;
}

TEST(Gff, PointwiseMeanIsZero) {
    TorusGrid g = make_grid(2, 64);
    auto e = gff_ensemble(g, 10000, 1);
    const double sd = std::sqrt(gff_real_part_variance(g) / 10000.0);
    for (std::size_t j = 0; j < g.M(); j += 7) {
        double m = 0;
        for (const auto& f : e) m += f[j].real() / e.size();
        EXPECT_LT(std::abs(m), 4 * sd) << "node " << j;
    }
}

TEST(Gff, SpectralCovariancePerMode) {
    TorusGrid g = make_grid(3, 64);
    auto e = gff_ensemble(g, 10000, 2);
    std::vector<double> m2(g.M(), 0.0);
    for (const auto& f : e) {
        auto c = f.coefficients();
        for (std::size_t k = 0; k < g.M(); ++k) m2[k] += std::norm(c[k]) / e.size();
    }
    for (std::size_t k = 0; k < g.M(); ++k) {
        double n = g.frequency(k);
        double closed = 2.0 / (g.period() * (1 + n * n));  // E|g|^2 = 2
        EXPECT_NEAR(m2[k] / closed, 1.0, 0.05) << "mode " << g.mode(k);
    }
}

TEST(Gff, RealPartVarianceByDirectSum) {
    TorusGrid g = make_grid(10, 512);
    double s = 0;
    for (int k = -256; k < 256; ++k) s += 1.0 / (1.0 + (k / 10.0) * (k / 10.0));
    EXPECT_NEAR(gff_real_part_variance(g), s / (2 * kPi * 10), 1e-14);
    auto e = gff_ensemble(g, 10000, 3);
    std::vector<double> re;
    for (const auto& f : e) re.push_back(f.at_origin().real());
    EXPECT_NEAR(stats::variance(re) / gff_real_part_variance(g), 1.0, 0.05);
}

TEST(Gibbs, LogWeightOfConstants) {
    TorusGrid g0 = make_grid(10, 64);
    EXPECT_EQ(log_gibbs_weight(TorusField(g0), 3), 0.0);
    TorusField one(g0, std::vector<cplx>(64, 1.0));
    EXPECT_NEAR(log_gibbs_weight(one, 3), -0.25 * 2 * kPi * 10, 1e-12);
    TorusGrid g1 = make_grid(1, 32);
    TorusField two(g1, std::vector<cplx>(32, 2.0));
    EXPECT_NEAR(log_gibbs_weight(two, 5), -(1.0 / 6) * 64 * 2 * kPi, 1e-11);
    TorusField bad(g1, std::vector<cplx>(32, 1e300));
    EXPECT_THROW(log_gibbs_weight(bad, 5), NumericalFailure);
}

TEST(Pcn, ZeroPotentialMatchesGff) {
    TorusGrid g = make_grid(2, 64);
    Rng rng(17);
    Ensemble e = sample_gibbs_pcn({g, 3.0, 0.0}, {1500, 50, 0.5, 5}, rng);
    auto ref = gff_ensemble(g, 1500, 18);
    auto a = evaluate_observable(obs_re_origin(), e.members);
    auto b = evaluate_observable(obs_re_origin(), ref);
    EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.01);
    EXPECT_GT(e.provenance.acceptance_rate, 0.99);
}

TEST(Pcn, SameSeedSameEnsemble) {
    TorusGrid g = make_grid(1, 32);
    Rng a(5), b(5);
    Ensemble x = sample_gibbs_pcn({g, 3.0, 1.0}, {20, 10, 0.3, 2}, a);
    Ensemble y = sample_gibbs_pcn({g, 3.0, 1.0}, {20, 10, 0.3, 2}, b);
    ASSERT_EQ(x.members.size(), 20u);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < g.M(); ++j) EXPECT_EQ(x.members[i][j], y.members[i][j]);
}

TEST(Pcn, DefocusingWeightShrinksLocalMass) {
    TorusGrid g = make_grid(1, 8);
    Rng rng(23);
    Ensemble e = sample_gibbs_pcn({g, 3.0, 1.0}, {4000, 500, 0.5, 10}, rng);
    auto ref = gff_ensemble(g, 4000, 24);
    auto mass = [](const TorusField& f) {
        double v = norm(f, LpNorm{2, {-1, 1}});
        return v * v;
    };
    std::vector<double> a, b;
    for (const auto& f : e.members) a.push_back(mass(f));
    for (const auto& f : ref) b.push_back(mass(f));
    double se = std::hypot(stats::standard_error(a), stats::standard_error(b));
    EXPECT_LT(stats::mean(a) + 3 * se, stats::mean(b));
}

TEST(Ensemble, SaveLoadRoundTrip) {
    TorusGrid g = make_grid(2, 32);
    Ensemble e{{g, 5.0, 1.0}, gff_ensemble(g, 3, 9), {}};
    e.provenance.sampler = "gff";
    e.provenance.seed = 9;
    auto dir = std::filesystem::temp_directory_path() / "gibbslab_ensemble_test";
    std::filesystem::remove_all(dir);
    save_ensemble(dir, e);
    Ensemble back = load_ensemble(dir);
    EXPECT_EQ(back.spec.p, 5.0);
    EXPECT_EQ(back.provenance.seed, 9u);
    ASSERT_EQ(back.members.size(), 3u);
    EXPECT_EQ(back.members[2][7], e.members[2][7]);
    e.members.clear();
    save_ensemble(dir, e);
    EXPECT_TRUE(load_ensemble(dir).members.empty());
    std::filesystem::remove_all(dir);
}

TEST(TailFit, QuantilesNondecreasingInR) {
    TorusGrid g = make_grid(20, 512);
    auto e = gff_ensemble(g, 300, 4);
    std::vector<double> R{2, 4, 8, 16, 30};
    TailFit f = tail_fit(e, R);
    for (const auto& lv : f.levels)
        for (std::size_t i = 1; i < R.size(); ++i) EXPECT_GE(lv.quantiles[i], lv.quantiles[i - 1]);
    EXPECT_GT(f.gamma, 0.0);
}

TEST(TailFit, Preconditions) {
    TorusGrid g = make_grid(20, 256);
    auto e = gff_ensemble(g, 200, 4);
    EXPECT_THROW(tail_fit(e, std::vector<double>{2, 4}), ConfigError);
    EXPECT_THROW(tail_fit(std::span(e).first(100), std::vector<double>{2, 4, 8}), ConfigError);
    EXPECT_THROW(tail_fit(e, std::vector<double>{2, 4, 40}), ConfigError);
}

TEST(Moments, SmallBetaNearOneAndMonotone) {
    TorusGrid g = make_grid(10, 256);
    auto e = gff_ensemble(g, 2000, 6);
    auto tiny = exp_moment(e, 1e-6, 3);
    EXPECT_NEAR(tiny.value, 1.0, 1e-4);
    auto a = exp_moment(e, 0.05, 3), b = exp_moment(e, 0.1, 3);
    EXPECT_LT(a.value, b.value);
    EXPECT_GT(a.stderr_, 0.0);
    EXPECT_THROW(exp_moment(e, 0.25, 3), ConfigError);
}

double oracle_1d(double a, const std::function<double(double)>& V, const std::function<double(double)>& g) {
    using boost::math::quadrature::gauss_kronrod;
    auto num = gauss_kronrod<double, 61>::integrate([&](double x) { return g(x) * std::exp(-a * x * x - V(x)); }, -8.0, 8.0, 15, 1e-14);
    auto den = gauss_kronrod<double, 61>::integrate([&](double x) { return std::exp(-a * x * x - V(x)); }, -8.0, 8.0, 15, 1e-14);
    return num / den;
}

TEST(BrascampLieb, OneDimensionalQuarticAgainstQuadrature) {
    Eigen::MatrixXd A(1, 1);
    A << 0.5;
    Eigen::VectorXd f(1);
    f << 1.0;
    auto V = [](const Eigen::VectorXd& x) { return std::pow(x[0], 4); };
    BlResult r = brascamp_lieb_check(A, V, f, BlMoment{2.0});
    double lhs = oracle_1d(0.5, [](double x) { return x * x * x * x; }, [](double x) { return x * x; });
    double rhs = oracle_1d(0.5, [](double) { return 0.0; }, [](double x) { return x * x; });
    EXPECT_NEAR(r.lhs, lhs, 1e-8 * lhs);
    EXPECT_NEAR(r.rhs, rhs, 1e-10);
    EXPECT_NEAR(rhs, 1.0, 1e-12);
    EXPECT_LT(r.lhs, r.rhs);
}

TEST(BrascampLieb, ZeroPotentialIsEquality) {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 0.3, 0.3, 0.8;
    Eigen::VectorXd f(2);
    f << 0.4, -1.0;
    auto r = brascamp_lieb_check(A, [](const Eigen::VectorXd&) { return 0.0; }, f, BlMoment{3.0}, 48, 64);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-10 * r.rhs);
}

TEST(BrascampLieb, TwoDimensionalExponentialForm) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
    Eigen::VectorXd f(2);
    f << 1.0, 0.0;
    auto V = [](const Eigen::VectorXd& x) { return std::pow(x.squaredNorm(), 2); };
    auto r = brascamp_lieb_check(A, V, f, BlExponential{0.1}, 48, 64);
    EXPECT_TRUE(r.holds());
    EXPECT_NEAR(r.rhs, 1.0 / std::sqrt(1 - 0.1), 1e-10);
}

TEST(BrascampLieb, RejectsBadInput) {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 2.0, 2.0, 1.0;  // indefinite
    Eigen::VectorXd f(2);
    f << 1, 0;
    EXPECT_THROW(brascamp_lieb_check(A, [](const Eigen::VectorXd&) { return 0.0; }, f, BlMoment{2}), ConfigError);
}

TEST(GaussHermite, IntegratesPolynomialsExactly) {
    auto [x, w] = gauss_hermite(20);
    double m0 = 0, m2 = 0, m4 = 0, m6 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m0 += w[i];
        m2 += w[i] * x[i] * x[i];
        m4 += w[i] * std::pow(x[i], 4);
        m6 += w[i] * std::pow(x[i], 6);
    }
    const double s = std::sqrt(kPi);
    EXPECT_NEAR(m0, s, 1e-13);
    EXPECT_NEAR(m2, s / 2, 1e-13);
    EXPECT_NEAR(m4, 3 * s / 4, 1e-12);
    EXPECT_NEAR(m6, 15 * s / 8, 1e-12);
}

TEST(Wasserstein, BasicIdentities) {
    TorusGrid g = make_grid(4, 128);
    auto a = gff_ensemble(g, 12, 1);
    auto b = gff_ensemble(g, 12, 2);
    EXPECT_EQ(wasserstein_1(a, a, 0.5).value, 0.0);
    auto perm = a;
    std::reverse(perm.begin(), perm.end());
    EXPECT_EQ(wasserstein_1(a, perm, 0.5).value, 0.0);
    EXPECT_NEAR(wasserstein_1(std::span(a).first(1), std::span(b).first(1), 0.5).value,
                ce_theta_distance(a[0], b[0], 0.5), 1e-15);
    auto ab = wasserstein_1(a, b, 0.5), ba = wasserstein_1(b, a, 0.5);
    EXPECT_TRUE(ab.exact);
    EXPECT_NEAR(ab.value, ba.value, 1e-12);
}

TEST(Wasserstein, TriangleInequality) {
    TorusGrid g = make_grid(4, 128);
    for (int rep = 0; rep < 5; ++rep) {
        auto a = gff_ensemble(g, 10, 10 * rep + 1);
        auto b = gff_ensemble(g, 10, 10 * rep + 2);
        auto c = gff_ensemble(g, 10, 10 * rep + 3);
        double ab = wasserstein_1(a, b, 0.3).value, bc = wasserstein_1(b, c, 0.3).value,
               ac = wasserstein_1(a, c, 0.3).value;
        EXPECT_LE(ac, ab + bc + 1e-9);
    }
}

TEST(Wasserstein, MixedToriUsePeriodicExtension) {
    TorusGrid big = make_grid(8, 256), small = make_grid(4, 128);
    auto a = gff_ensemble(big, 5, 1);
    auto b = gff_ensemble(small, 5, 2);
    auto w = wasserstein_1(a, b, 0.5);
    EXPECT_GT(w.value, 0.0);
    EXPECT_TRUE(std::isfinite(w.value));
}

}  // namespace
}  // namespace gibbslab
