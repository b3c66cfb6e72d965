#include <cmath>

#include <fmt/format.h>

#include "gibbslab/langevin/langevin.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/measures/moments.hpp"
#include "gibbslab/measures/tail_fit.hpp"
#include "gibbslab/nls/experiments.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/parallel.hpp"
#include "gibbslab/support/stats.hpp"
#include "internal.hpp"

namespace gibbslab::harness {

unsigned workers(const ExperimentConfig& c) {
    auto w = c.get_int("run", "workers", 1);
    require(w >= 1, "run.workers must be >= 1");
    return static_cast<unsigned>(w);
}

TorusGrid model_grid(const ExperimentConfig& c, double L, double default_modes_per_unit) {
    if (c.has("model", "M")) {
        auto M = c.get_int("model", "M", 0);
        require(M >= 8 && M % 2 == 0, "model.M must be an even integer >= 8");
        return make_grid(L, static_cast<std::size_t>(M));
    }
    double mpu = c.get_double("model", "modes_per_unit", default_modes_per_unit);
    require(mpu > 0, "model.modes_per_unit must be positive");
    auto M = static_cast<std::size_t>(std::llround(L * mpu / 2.0)) * 2;
    return make_grid(L, M);
}

SamplerSetup sampler_setup(const ExperimentConfig& c, const GibbsSpec& spec, std::size_t default_n,
                           const std::string& default_method) {
    SamplerSetup s;
    s.method = c.get_string("sampler", "method", default_method);
    require(s.method == "langevin" || s.method == "pcn" || s.method == "gff",
            "sampler.method must be langevin, pcn or gff");
    auto n = c.get_int("sampler", "n", static_cast<std::int64_t>(default_n));
    require(n >= 0, "sampler.n must be non-negative");
    s.n = static_cast<std::size_t>(n);
    if (s.method == "pcn") {
        // tuned at L = 10, M = 512: acceptance ~0.4, thinning ~2-3 autocorrelation times
        s.step = c.get_double("sampler", "step", spec.p >= 5 ? 0.2 : 0.3);
        s.burn_in = c.get_double("sampler", "burn_in", 2000);
        s.thinning = c.get_double("sampler", "thinning", spec.p >= 5 ? 300 : 200);
        require(s.step > 0 && s.step <= 1, "sampler.step must lie in (0, 1]");
        require(s.thinning >= 1 && s.burn_in >= 0, "sampler.thinning >= 1 and burn_in >= 0 required");
    } else {
        s.dt = c.get_double("sampler", "dt", 2e-3);
        s.burn_in = c.get_double("sampler", "burn_in", 3.0);
        s.thinning = c.get_double("sampler", "thinning", 1.0);
        auto ch = c.get_int("sampler", "chains", 20);
        require(ch >= 1, "sampler.chains must be >= 1");
        s.chains = static_cast<std::size_t>(ch);
        s.taming = c.get_bool("sampler", "taming", spec.p >= 5);
    }
    return s;
}

std::string describe(const SamplerSetup& s) {
    if (s.method == "pcn") return fmt::format("pcn n={} step={} burn_in={} thinning={}", s.n, s.step, s.burn_in, s.thinning);
    if (s.method == "gff") return fmt::format("gff n={}", s.n);
    return fmt::format("langevin n={} dt={} burn_in={} thinning={} chains={} taming={}", s.n, s.dt, s.burn_in,
                       s.thinning, s.chains, s.taming);
}

Ensemble draw_ensemble(const GibbsSpec& spec, const SamplerSetup& s, std::uint64_t seed, unsigned nworkers) {
    validate(spec);
    Ensemble e{spec, {}, {}};
    e.provenance.sampler = s.method;
    e.provenance.seed = seed;
    if (s.n == 0) return e;
    if (s.method == "gff") {
        std::vector<std::optional<TorusField>> slots(s.n);
        parallel_for(
            s.n,
            [&](std::size_t i) {
                Rng rng(seed, i);
                slots[i].emplace(sample_gff(spec.grid, rng));
            },
            nworkers);
        for (auto& f : slots) e.members.push_back(std::move(*f));
        return e;
    }
    if (s.method == "pcn") {
        Rng rng(seed);
        PcnOptions o{s.n, static_cast<std::size_t>(s.burn_in), s.step, static_cast<std::size_t>(s.thinning)};
        return sample_gibbs_pcn(spec, o, rng);
    }
    LangevinConfig cfg{spec, s.dt, 0.0, s.taming};
    EquilibriumOptions o;
    o.burn_in = s.burn_in;
    o.n_samples = s.n;
    o.thinning = s.thinning;
    o.n_chains = s.chains;
    o.workers = nworkers;
    return run_to_equilibrium(cfg, o, seed);
}

namespace {

GibbsSpec model_spec(const ExperimentConfig& c, double default_p, double default_L, double default_mpu) {
    GibbsSpec spec{model_grid(c, c.get_double("model", "L", default_L), default_mpu),
                   c.get_double("model", "p", default_p), c.get_double("sampler", "potential_strength", 1.0)};
    validate(spec);
    return spec;
}

void note_ensemble(ExperimentResult& r, const Ensemble& e, const std::string& label) {
    for (const auto& w : e.provenance.warnings) r.warnings.push_back(label + ": " + w);
    if (e.provenance.acceptance_rate >= 0) r.summary[label + ".acceptance_rate"] = e.provenance.acceptance_rate;
}

}  // namespace

ExperimentResult run_sample(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "sample";
    GibbsSpec spec = model_spec(c, 3.0, 10.0, 51.2);
    SamplerSetup s = sampler_setup(c, spec, 100, "pcn");
    r.rng_streams.push_back(fmt::format("ensemble: {} seed={}", describe(s), c.seed()));
    Ensemble e = draw_ensemble(spec, s, c.seed(), workers(c));
    note_ensemble(r, e, "ensemble");
    r.summary["members"] = static_cast<double>(e.members.size());
    r.ensemble = std::move(e);
    return r;
}

ExperimentResult run_tails(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "tails";
    GibbsSpec spec = model_spec(c, 5.0, 40.0, 25.6);
    SamplerSetup s = sampler_setup(c, spec, 5000, "langevin");
    const auto R = c.get_doubles("tails", "R", {2, 4, 8, 16, 32});
    const auto levels = c.get_doubles("tails", "levels", {0.5, 0.9});
    r.rng_streams.push_back(fmt::format("ensemble: {} seed={}", describe(s), c.seed()));
    Ensemble e = draw_ensemble(spec, s, c.seed(), workers(c));
    note_ensemble(r, e, "ensemble");
    TailFit fit = tail_fit(e.members, R, levels);

    CsvTable t{"tails.csv", {"R", "q", "quantile", "stderr"}, {}};
    for (const auto& lv : fit.levels)
        for (std::size_t i = 0; i < R.size(); ++i)
            t.add({csv_number(R[i]), csv_number(lv.q), csv_number(lv.quantiles[i]), csv_number(lv.stderrs[i])});
    r.tables.push_back(std::move(t));

    const double target = 2.0 / (spec.p + 3.0);
    const double mid = 0.5 * (target + 0.5);
    r.summary["gamma"] = fit.gamma;
    r.summary["gamma_halfwidth"] = fit.halfwidth;
    r.summary["gamma_gibbs"] = target;
    r.summary["gamma_midpoint"] = mid;
    for (const auto& lv : fit.levels) r.summary[fmt::format("slope_q{}", lv.q)] = lv.fit.slope;
    if (spec.potential_strength > 0) {
        const double hi = c.get_double("tails", "gamma_max", mid);
        r.verdicts.push_back({"gamma_below_midpoint", fit.gamma < hi, fmt::format("gamma = {:.4f}, limit {:.4f}", fit.gamma, hi)});
    } else {
        const double lo = c.get_double("tails", "gamma_min", mid);
        r.verdicts.push_back({"gamma_above_midpoint", fit.gamma > lo, fmt::format("gamma = {:.4f}, limit {:.4f}", fit.gamma, lo)});
    }
    return r;
}

ExperimentResult run_moments(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "moments";
    const double p = c.get_double("model", "p", 3.0);
    const auto Ls = c.get_doubles("model", "L", {10, 20, 40});
    const double beta = c.get_double("moments", "beta_factor", 0.5) / (p + 1.0);
    const double max_se = c.get_double("moments", "max_se", 3.0);
    CsvTable t{"moments.csv", {"L", "beta", "estimate", "stderr"}, {}};
    std::vector<MomentEstimate> est;
    for (std::size_t k = 0; k < Ls.size(); ++k) {
        GibbsSpec spec{model_grid(c, Ls[k], 25.6), p, c.get_double("sampler", "potential_strength", 1.0)};
        SamplerSetup s = sampler_setup(c, spec, 2000, "langevin");
        const std::uint64_t seed = derive_seed(c.seed(), k);
        r.rng_streams.push_back(fmt::format("L={}: {} seed=derive({}, {})", Ls[k], describe(s), c.seed(), k));
        Ensemble e = draw_ensemble(spec, s, seed, workers(c));
        note_ensemble(r, e, fmt::format("L={}", Ls[k]));
        MomentEstimate m = exp_moment(e.members, beta, p);
        if (!m.reliable) r.warnings.push_back(fmt::format("L={}: top 1% of samples carry {:.0f}% of the moment", Ls[k], 100 * m.top_share));
        t.add({csv_number(Ls[k]), csv_number(beta), csv_number(m.value), csv_number(m.stderr_)});
        r.summary[fmt::format("moment_L{}", Ls[k])] = m.value;
        est.push_back(m);
    }
    r.tables.push_back(std::move(t));
    double worst = 0;
    for (std::size_t i = 0; i < est.size(); ++i)
        for (std::size_t j = i + 1; j < est.size(); ++j) {
            double se = std::hypot(est[i].stderr_, est[j].stderr_);
            worst = std::max(worst, std::abs(est[i].value - est[j].value) / se);
        }
    r.summary["max_z"] = worst;
    r.verdicts.push_back({"uniform_in_L", worst <= max_se, fmt::format("max pairwise |diff|/se = {:.3f}, limit {}", worst, max_se)});
    return r;
}

ExperimentResult run_invariance(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "invariance";
    GibbsSpec spec = model_spec(c, 3.0, 10.0, 51.2);
    SamplerSetup s = sampler_setup(c, spec, 2000, "pcn");
    NlsConfig nls{spec.p, c.get_double("nls", "dt", 1e-3),
                  static_cast<std::size_t>(c.get_int("nls", "padding", 1)), 1.0};
    const double T = c.get_double("nls", "T", 1.0);
    const bool split = c.get_bool("nls", "split", true);
    r.rng_streams.push_back(fmt::format("ensemble: {} seed={}", describe(s), c.seed()));
    Ensemble e = draw_ensemble(spec, s, c.seed(), workers(c));
    note_ensemble(r, e, "ensemble");
    InvarianceReport rep = invariance_experiment(e.members, nls, T, workers(c), split);
    CsvTable t{"invariance.csv", {"observable", "t", "ks_statistic", "p_value"}, {}};
    for (const auto& row : rep.rows)
        t.add({row.observable, csv_number(row.time), csv_number(row.ks.statistic), csv_number(row.ks.p_value)});
    r.tables.push_back(std::move(t));
    r.summary["min_p_value"] = rep.min_p_value();
    constexpr double kAlpha = 0.01;
    for (const auto& row : rep.rows)
        if (row.time == T)
            r.verdicts.push_back({fmt::format("ks_{}", row.observable), row.ks.p_value > kAlpha,
                                  fmt::format("p = {:.4g} at t = {}", row.ks.p_value, T)});
    return r;
}

}  // namespace gibbslab::harness
