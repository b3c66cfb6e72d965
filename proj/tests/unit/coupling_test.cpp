#include <cmath>

#include <gtest/gtest.h>

#include "gibbslab/coupling/shared_noise.hpp"
#include "gibbslab/coupling/skorokhod.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/measures/observables.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/stats.hpp"

namespace gibbslab {
namespace {

std::vector<TorusField> gff_ensemble(const TorusGrid& g, std::size_t n, std::uint64_t seed) {
    std::vector<TorusField> out;
    for (std::size_t i = 0; i < n; ++i) {
        Rng r(seed, i);
        out.push_back(sample_gff(g, r));
    }
    return out;
}

// rate that puts eps just below 1/n
double rate_for(double L, std::size_t n) { return 16.0 * std::log(double(n)) / L * (1 + 1e-9); }

TEST(Skorokhod, ParameterArithmetic) {
    TorusGrid g = make_grid(4, 128);
    auto target = gff_ensemble(g, 50, 1);
    SkorokhodInputs in;
    in.L = 1024;
    in.eta = 0.1;
    in.alpha = 0.5;
    in.rate = 1e-3;
    auto s = derive_params(in, target);
    EXPECT_NEAR(s.R, 2.0, 1e-12);
    EXPECT_EQ(s.K, 32);
    EXPECT_NEAR(s.delta, 1.0 / 16, 1e-12);
    EXPECT_LE(s.delta, std::pow(1024.0, -0.4) + 1e-15);
    ASSERT_EQ(s.x.size(), 65u);
    EXPECT_EQ(s.x.front(), -s.R);
    EXPECT_EQ(s.x.back(), s.R);
    EXPECT_LE(s.tau, std::pow(1024.0, -0.1) / 8 + 1e-15);
    EXPECT_GT(s.M, 0.0);
}

TEST(Skorokhod, RefusesUnresolvableEps) {
    TorusGrid g = make_grid(4, 128);
    auto target = gff_ensemble(g, 50, 1);
    SkorokhodInputs in;
    in.L = 64;
    in.rate = 1.0;  // eps = e^{-4} < 1/50
    EXPECT_THROW(derive_params(in, target), ConfigError);
}

TEST(Skorokhod, CellAssignment) {
    TorusGrid g = make_grid(4, 128);
    auto target = gff_ensemble(g, 50, 2);
    SkorokhodInputs in;
    in.L = 16;
    in.rate = rate_for(16, 50);
    auto s = derive_params(in, target);
    auto z = assign_cell(TorusField(g), s);
    ASSERT_TRUE(z.has_value());
    for (auto j : z->j) EXPECT_EQ(j, 0);
    TorusField out(g, std::vector<cplx>(g.M(), cplx(s.M + 1, 0)));
    EXPECT_FALSE(assign_cell(out, s).has_value());
    // mid-cell fields less than tau/4 apart share a cell
    const cplx mid((3 + 0.5) * s.tau, (-2 + 0.5) * s.tau);
    TorusField a(g, std::vector<cplx>(g.M(), mid));
    auto b = TorusField::from_function(g, [&](double x) { return mid + 0.2 * s.tau * cplx(std::sin(x), std::cos(x)); });
    ASSERT_LT(grid_distance(a, b, s), s.tau / 4);
    EXPECT_EQ(*assign_cell(a, s), *assign_cell(b, s));
}

TEST(Skorokhod, SelfCouplingStaysInCells) {
    TorusGrid g = make_grid(4, 128);
    auto e = gff_ensemble(g, 400, 3);
    SkorokhodInputs in;
    in.L = 16;
    in.rate = rate_for(16, 400);
    auto s = derive_params(in, e);
    Rng rng(4);
    auto res = build_coupling(e, e, s, rng);
    std::size_t good = 0;
    for (const auto& p : res.pairs) {
        if (p.branch != Branch::GoodCell) continue;
        ++good;
        EXPECT_LE(grid_distance(e[p.target], e[p.approx], s), 2 * s.tau);
    }
    const double n = double(e.size());
    const double expect = (1 - s.eps) * n * (1 - s.eps_tilde);
    EXPECT_GE(double(good), expect - 3 * std::sqrt(n * s.eps));
    EXPECT_EQ(res.fallbacks, 0u);
}

TEST(Skorokhod, CorrectionLimitKeepsMarginal) {
    TorusGrid g = make_grid(4, 128);
    auto target = gff_ensemble(g, 800, 5), approx = gff_ensemble(g, 800, 6), ref = gff_ensemble(g, 800, 7);
    SkorokhodInputs in;
    in.L = 16;
    in.rate = 1e-9;  // eps -> 1
    auto s = derive_params(in, target);
    Rng rng(8);
    auto res = build_coupling(target, approx, s, rng);
    std::vector<TorusField> drawn;
    for (const auto& p : res.pairs) {
        EXPECT_EQ(p.branch, Branch::Correction);
        drawn.push_back(approx[p.approx]);
    }
    auto a = evaluate_observable(obs_re_origin(), drawn), b = evaluate_observable(obs_re_origin(), ref);
    EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.01);
}

TEST(Skorokhod, MarginalPreservedAndStableUnderFreshRandomness) {
    TorusGrid g = make_grid(4, 128);
    auto target = gff_ensemble(g, 1000, 9), approx = gff_ensemble(g, 1000, 10), ref = gff_ensemble(g, 1000, 11);
    SkorokhodInputs in;
    in.L = 16;
    in.rate = rate_for(16, 1000);
    auto s = derive_params(in, target);
    std::vector<std::vector<double>> draws;
    for (std::uint64_t seed : {12u, 13u}) {
        Rng rng(seed);
        auto res = build_coupling(target, approx, s, rng);
        std::vector<TorusField> drawn;
        for (const auto& p : res.pairs) drawn.push_back(approx[p.approx]);
        for (const auto& obs : {obs_re_origin(), obs_lp_unit(kInfinity)}) {
            auto a = evaluate_observable(obs, drawn), b = evaluate_observable(obs, ref);
            EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.01) << obs.name;
        }
        draws.push_back(evaluate_observable(obs_re_origin(), drawn));
    }
    EXPECT_GT(stats::ks_two_sample(draws[0], draws[1]).p_value, 0.01);
}

TEST(Quality, IdenticalPairsNeverExceed) {
    TorusGrid g = make_grid(8, 256);
    auto e = gff_ensemble(g, 30, 1);
    auto q = coupling_quality(e, e, 0.1, 16);
    EXPECT_EQ(q.exceed, 0u);
    EXPECT_EQ(q.probability, 0.0);
    EXPECT_EQ(q.ci.low, 0.0);
    EXPECT_GT(q.ci.high, 0.0);
}

TEST(SharedNoise, DegenerateEqualVolumesGiveIdenticalPairs) {
    SharedNoiseOptions o;
    o.K = 8;
    o.L = {8};
    o.burn_in = 0.5;
    o.n_samples = 3;
    auto s = langevin_shared_noise_coupling(o, 1);
    for (const auto& smp : s)
        for (std::size_t j = 0; j < smp.big.size(); ++j) EXPECT_EQ(smp.big[j], smp.small[0][j]);
}

TEST(SharedNoise, MarginalsMatchIndependentFlows) {
    SharedNoiseOptions o;
    o.K = 16;
    o.L = {8};
    o.burn_in = 3;
    o.n_samples = 400;
    o.workers = 4;
    auto s = langevin_shared_noise_coupling(o, 2);
    SharedNoiseOptions solo = o;
    solo.K = 8;
    auto ref = langevin_shared_noise_coupling(solo, 3);
    std::vector<TorusField> a, b, big, bigref;
    for (const auto& x : s) a.push_back(x.small[0]), big.push_back(x.big);
    for (const auto& x : ref) b.push_back(x.big);
    o.K = 16;
    o.L = {16};
    auto r16 = langevin_shared_noise_coupling(o, 4);
    for (const auto& x : r16) bigref.push_back(x.big);
    auto va = evaluate_observable(obs_re_origin(), a), vb = evaluate_observable(obs_re_origin(), b);
    EXPECT_GT(stats::ks_two_sample(va, vb).p_value, 0.01);
    auto wa = evaluate_observable(obs_lp_unit(2.0), big), wb = evaluate_observable(obs_lp_unit(2.0), bigref);
    EXPECT_GT(stats::ks_two_sample(wa, wb).p_value, 0.01);
    EXPECT_THROW(coupling_grid(8, 31.1), ConfigError);
}

}  // namespace
}  // namespace gibbslab
