#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gibbslab/langevin/coupled.hpp"
#include "gibbslab/langevin/langevin.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/measures/observables.hpp"
#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/stats.hpp"

namespace gibbslab {
namespace {

const cplx I{0.0, 1.0};

TEST(Langevin, LinearModeDecaysExactly) {
    TorusGrid g = make_grid(2, 64);
    for (double n : {0.0, 0.5, 3.0}) {
        LangevinConfig cfg{{g, 3.0, 0.0}, 1e-2, 0.0, false};
        LangevinIntegrator it(cfg);
        auto u0 = TorusField::from_function(g, [n](double x) { return std::exp(I * n * x); });
        LangevinState s = make_langevin_state(u0);
        std::vector<cplx> zero(g.M(), 0.0);
        for (int k = 0; k < 50; ++k) it.step_with_noise(s, zero);
        const double t = 0.5, decay = std::exp(-(1 + n * n) * t);
        EXPECT_NEAR(s.t, t, 1e-12);
        for (std::size_t j = 0; j < g.M(); ++j) EXPECT_LT(std::abs(s.psi[j] - decay * u0[j]), 1e-10);
    }
}

TEST(Langevin, LinearObjectStartsAtZero) {
    TorusGrid g = make_grid(2, 32);
    Rng rng(1);
    LangevinState s = make_langevin_state(sample_gff(g, rng));
    for (auto c : s.lin_hat) EXPECT_EQ(c, cplx(0.0));
    LangevinIntegrator it({{g, 3.0, 1.0}, 1e-3, 0.0, false});
    it.step(s, rng);
    double m = 0;
    for (auto c : s.lin_hat) m = std::max(m, std::abs(c));
    EXPECT_GT(m, 0.0);
}

TEST(Langevin, FluctuationDissipationPerMode) {
    // drift off: the exponential integrator is exact in law for every mode
    TorusGrid g = make_grid(1, 64);
    LangevinConfig cfg{{g, 3.0, 0.0}, 0.05, 0.0, false};
    const std::size_t chains = 500, per_chain = 20;
    std::vector<double> m2(g.M(), 0.0);
    for (std::size_t c = 0; c < chains; ++c) {
        Rng rng(77, c);
        LangevinIntegrator it(cfg);
        LangevinState s = make_langevin_state(TorusField(g));
        it.advance(s, 5.0, rng);
        for (std::size_t k = 0; k < per_chain; ++k) {
            it.advance(s, 2.0, rng);
            for (std::size_t j = 0; j < g.M(); ++j) m2[j] += std::norm(s.psi_hat[j]);
        }
    }
    for (std::size_t j = 0; j < g.M(); ++j) {
        double n = g.frequency(j);
        if (std::abs(n) > 16) continue;
        double target = 2.0 / (g.period() * (1 + n * n));
        EXPECT_NEAR(m2[j] / (chains * per_chain) / target, 1.0, 0.05) << "mode " << n;
    }
}

TEST(Langevin, ZeroPotentialEquilibriumIsGff) {
    TorusGrid g = make_grid(4, 128);
    LangevinConfig cfg{{g, 3.0, 0.0}, 1e-2, 0.0, false};
    EquilibriumOptions o;
    o.burn_in = 2;
    o.n_samples = 1000;
    o.thinning = 1.5;
    o.n_chains = 50;
    o.workers = 4;
    Ensemble e = run_to_equilibrium(cfg, o, 3);
    std::vector<TorusField> ref;
    for (std::size_t i = 0; i < 1000; ++i) {
        Rng r(4, i);
        ref.push_back(sample_gff(g, r));
    }
    for (const auto& obs : {obs_re_origin(), obs_lp_unit(2.0)}) {
        auto a = evaluate_observable(obs, e.members), b = evaluate_observable(obs, ref);
        EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.01) << obs.name;
    }
}

TEST(Langevin, SameSeedSameEnsembleAnyWorkerCount) {
    TorusGrid g = make_grid(2, 64);
    LangevinConfig cfg{{g, 3.0, 1.0}, 2e-3, 0.0, false};
    EquilibriumOptions o;
    o.burn_in = 1;
    o.n_samples = 6;
    o.thinning = 0.1;
    o.n_chains = 3;
    o.workers = 1;
    Ensemble a = run_to_equilibrium(cfg, o, 12);
    o.workers = 3;
    Ensemble b = run_to_equilibrium(cfg, o, 12);
    ASSERT_EQ(a.members.size(), b.members.size());
    for (std::size_t i = 0; i < a.members.size(); ++i)
        for (std::size_t j = 0; j < g.M(); ++j) EXPECT_EQ(a.members[i][j], b.members[i][j]);
}

TEST(Langevin, BlowUpReportedWithStep) {
    TorusGrid g = make_grid(1, 32);
    LangevinConfig cfg{{g, 5.0, 1.0}, 0.5, 0.0, false};
    LangevinIntegrator it(cfg);
    LangevinState s = make_langevin_state(TorusField(g, std::vector<cplx>(32, 50.0)));
    Rng rng(1);
    try {
        for (int k = 0; k < 20; ++k) it.step(s, rng);
        FAIL() << "expected a numerical failure";
    } catch (const NumericalFailure& e) {
        EXPECT_GE(e.step(), 1u);
        ASSERT_NE(e.dump(), nullptr);
        EXPECT_EQ(e.dump()->values.size(), 32u);
    }
}

TEST(Langevin, TiltPrecondition) {
    TorusGrid g = make_grid(1, 32);
    EXPECT_THROW(validate(LangevinConfig{{g, 3.0, 1.0}, 1e-3, 0.25, false}), ConfigError);
    EXPECT_NO_THROW(validate(LangevinConfig{{g, 3.0, 1.0}, 1e-3, 0.2, false}));
}

TEST(Coupled, FullySharedNoiseSameDataStaysIdentical) {
    TorusGrid g = make_grid(4, 128);
    LangevinConfig cfg{{g, 3.0, 1.0}, 1e-3, 0.0, false};
    CoupledFlows flows(cfg, {cfg});
    flows.initialise(TorusField(g));
    Rng rng(8);
    flows.advance(0.5, rng);
    for (std::size_t j = 0; j < g.M(); ++j) EXPECT_EQ(flows.big().psi[j], flows.small(0).psi[j]);
}

TEST(Coupled, NoiseIsSharedNodeForNode) {
    // one short step from zero with drift off: psi is the locally smoothed
    // noise, so the two flows agree in the interior when it is shared. The
    // Nyquist cut gives the smoothing kernel a slowly decaying tail, hence
    // agreement to ~1e-4 rather than round-off; independent noise gives O(1).
    TorusGrid big = make_grid(8, 256), small = make_grid(4, 128);
    LangevinConfig cb{{big, 3.0, 0.0}, 1e-3, 0.0, false}, cs{{small, 3.0, 0.0}, 1e-3, 0.0, false};
    CoupledFlows flows(cb, {cs});
    flows.initialise(TorusField(big));
    Rng rng(2);
    flows.step(rng);
    const std::size_t off = flows.offset(0);
    EXPECT_EQ(off, 64u);
    double scale = 0, diff = 0;
    for (std::size_t j = 32; j < 96; ++j) {
        scale = std::max(scale, std::abs(flows.small(0).psi[j]));
        diff = std::max(diff, std::abs(flows.big().psi[off + j] - flows.small(0).psi[j]));
    }
    EXPECT_GT(scale, 0.1);
    EXPECT_LT(diff, 1e-3 * scale);
    EXPECT_THROW(CoupledFlows(cb, {LangevinConfig{{make_grid(4, 100), 3.0, 0.0}, 1e-3, 0.0, false}}), ConfigError);
}

TEST(Coupled, LinearLeakageDecaysInsideWindow) {
    // drift off, identical data on the overlap: the difference is heat leakage from outside [-pi L, pi L]
    auto leak = [](double L) {
        TorusGrid big = make_grid(2 * L, static_cast<std::size_t>(2 * L * 16)), small = make_grid(L, static_cast<std::size_t>(L * 16));
        LangevinConfig cb{{big, 3.0, 0.0}, 1e-2, 0.0, false}, cs{{small, 3.0, 0.0}, 1e-2, 0.0, false};
        double acc = 0;
        for (int r = 0; r < 20; ++r) {
            CoupledFlows flows(cb, {cs});
            Rng rng(5, r);
            flows.initialise(sample_gff(big, rng));
            flows.advance(2.0, rng);
            auto pair = flows.pair(0);
            const double h = std::numbers::pi * L / 2;
            double a = norm(restrict_to_grid(pair.big.psi, small) - pair.small.psi, SupNorm{{-h, h}});
            acc += a / 20;
        }
        return acc;
    };
    double d8 = leak(8), d16 = leak(16);
    EXPECT_LT(d16, d8);
    EXPECT_LT(d8, 0.5);
}

TEST(Coupled, ContractionAtTimeFour) {
    const double theta = 0.25, t = 4.0;
    const double factor = 2 * std::sqrt(2.0) * std::exp(-(1 - 2 * theta * theta) * t);
    TorusGrid big = make_grid(16, 512), small = make_grid(8, 256);
    LangevinConfig cb{{big, 3.0, 1.0}, 2e-3, 0.0, false}, cs{{small, 3.0, 1.0}, 2e-3, 0.0, false};
    double d0 = 0, d4 = 0, noise = 0;
    const int runs = 30;
    for (int r = 0; r < runs; ++r) {
        CoupledFlows flows(cb, {cs});
        Rng rng(9, r);
        TorusField a = sample_gff(big, rng), b = sample_gff(small, rng);
        flows.initialise(a, {b});
        d0 += flows.pair(0).psi_distance(theta) / runs;
        flows.advance(t, rng);
        auto p = flows.pair(0);
        d4 += p.psi_distance(theta) / runs;
        noise += p.linear_distance(theta) / runs;
    }
    EXPECT_LE(d4, factor * d0 + noise);
}

TEST(HeatCheck, Cases) {
    TorusGrid g = make_grid(50, 4096);
    auto bump = TorusField::from_function(g, [](double x) { return cplx(std::exp(-x * x / 0.01), 0); });
    auto h0 = heat_ce_bound_check(bump, 0.25, 0.0);
    EXPECT_NEAR(h0.lhs, ce_theta(bump, 0.25), 1e-14);
    EXPECT_NEAR(h0.rhs, 2 * h0.lhs, 1e-14);
    EXPECT_TRUE(h0.holds);
    auto h1 = heat_ce_bound_check(bump, 0.25, 1.0);
    EXPECT_TRUE(h1.holds);
    EXPECT_LE(h1.lhs, h1.rhs);
    auto z = heat_ce_bound_check(TorusField(g), 0.25, 1.0);
    EXPECT_EQ(z.lhs, 0.0);
    EXPECT_EQ(z.rhs, 0.0);
}

}  // namespace
}  // namespace gibbslab
