#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "gibbslab/coupling/skorokhod.hpp"
#include "gibbslab/measures/observables.hpp"
#include "gibbslab/measures/wasserstein.hpp"
#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/parallel.hpp"
#include "gibbslab/support/stats.hpp"
#include "internal.hpp"

namespace gibbslab::harness {

namespace {

struct Batch {
    std::vector<TorusField> big;
    std::vector<std::vector<TorusField>> small;  // small[l][i]
    std::vector<double> t;
    std::vector<std::vector<double>> mean_ce;    // mean_ce[l][time]
};

CoupledSetup coupling_setup(const ExperimentConfig& c, double default_K) {
    CoupledSetup s;
    s.p = c.get_double("model", "p", 3.0);
    s.taming = s.p >= 5;
    s.modes_per_unit = c.get_double("model", "modes_per_unit", 32.0);
    s.dt = c.get_double("coupled", "dt", 0.01);
    s.burn_in = c.get_double("coupled", "burn_in", 5.0);
    const double K = c.get_double("coupled", "K", default_K);
    s.L = {K};
    return s;
}

Batch draw_batch(const CoupledSetup& s, std::size_t n, std::uint64_t seed, std::uint64_t stream, double theta,
                 double record_dt, unsigned nworkers) {
    std::vector<std::optional<CoupledDraw>> slots(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            Rng rng(seed, stream, i);
            slots[i].emplace(coupled_draw(s, rng, theta, record_dt));
        },
        nworkers);
    Batch b;
    const std::size_t nl = s.L.size() - 1;
    b.small.resize(nl);
    b.mean_ce.resize(nl);
    for (std::size_t i = 0; i < n; ++i) {
        CoupledDraw& d = *slots[i];
        b.big.push_back(std::move(d.fields[0]));
        for (std::size_t l = 0; l < nl; ++l) b.small[l].push_back(std::move(d.fields[l + 1]));
        if (record_dt > 0) {
            if (i == 0) {
                b.t = d.t;
                for (auto& m : b.mean_ce) m.assign(d.t.size(), 0.0);
            }
            for (std::size_t l = 0; l < nl; ++l)
                for (std::size_t k = 0; k < d.t.size(); ++k) b.mean_ce[l][k] += d.ce[l][k] / static_cast<double>(n);
        }
    }
    return b;
}

CsvTable ce_table(const Batch& b, const std::vector<double>& Ls) {
    CsvTable t{"coupled_runs.csv", {"L", "t", "ce_distance"}, {}};
    for (std::size_t l = 0; l < Ls.size(); ++l)
        for (std::size_t k = 0; k < b.t.size(); ++k) t.add({csv_number(Ls[l]), csv_number(b.t[k]), csv_number(b.mean_ce[l][k])});
    return t;
}

}  // namespace

ExperimentResult run_coupling(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "coupling";
    CoupledSetup s = coupling_setup(c, 256.0);
    auto Ls = c.get_doubles("coupled", "L", {16, 32, 64});
    std::sort(Ls.begin(), Ls.end());
    for (double L : Ls) require(L < s.L[0], "coupling: every L must be smaller than K");
    s.L.insert(s.L.end(), Ls.begin(), Ls.end());
    const auto pairs = static_cast<std::size_t>(c.get_int("coupled", "pairs", 300));
    const auto pilot_pairs = static_cast<std::size_t>(c.get_int("coupled", "pilot_pairs", 100));
    require(pairs >= 2 && pilot_pairs >= 1, "coupling: need pairs >= 2 and pilot_pairs >= 1");
    const double record_dt = c.get_double("coupled", "record_dt", 0.25);
    SkorokhodInputs in;
    in.eta = c.get_double("coupling", "eta", 0.1);
    in.alpha = c.get_double("coupling", "alpha", 0.5);
    in.beta = c.get_double("coupling", "beta", 1.0);
    in.kappa = c.get_double("coupling", "kappa", 1.0);
    in.theta = c.get_double("coupling", "theta", 0.5);
    const unsigned nw = workers(c);
    r.rng_streams.push_back(fmt::format("pilot pair i: stream (seed, 1, i); main pair i: stream (seed, 2, i); "
                                        "skorokhod draws for L index l: stream (seed, 3, l); K={} L={} modes_per_unit={} dt={} burn_in={}",
                                        s.L[0], fmt::join(Ls, "/"), s.modes_per_unit, s.dt, s.burn_in));

    // pilot: the constant C in p_L <= C L^{-eta} from Wilson upper limits
    Batch pilot = draw_batch(s, pilot_pairs, c.seed(), 1, 0.0, 0.0, nw);
    double C = 0;
    for (std::size_t l = 0; l < Ls.size(); ++l) {
        QualityEstimate q = coupling_quality(pilot.big, pilot.small[l], in.eta, Ls[l]);
        C = std::max(C, q.ci.high * std::pow(Ls[l], in.eta));
    }

    Batch main = draw_batch(s, pairs, c.seed(), 2, in.theta, record_dt, nw);
    r.tables.push_back(ce_table(main, Ls));
    CsvTable qt{"quality.csv", {"L", "exceedance", "CI_low", "CI_high"}, {}};
    std::vector<QualityEstimate> qs;
    for (std::size_t l = 0; l < Ls.size(); ++l) {
        QualityEstimate q = coupling_quality(main.big, main.small[l], in.eta, Ls[l]);
        qt.add({csv_number(Ls[l]), csv_number(q.probability), csv_number(q.ci.low), csv_number(q.ci.high)});
        qs.push_back(q);
    }
    r.tables.push_back(std::move(qt));
    bool nonincreasing = true, below = true;
    std::string qd;
    for (std::size_t l = 0; l < qs.size(); ++l) {
        if (l > 0 && qs[l].probability > qs[l - 1].probability) nonincreasing = false;
        if (qs[l].probability > C * std::pow(Ls[l], -in.eta)) below = false;
        qd += fmt::format("{}L={}: {}/{}", qd.empty() ? "" : ", ", Ls[l], qs[l].exceed, qs[l].total);
    }
    r.summary["C"] = C;
    r.verdicts.push_back({"exceedance_nonincreasing", nonincreasing, qd});
    r.verdicts.push_back({"exceedance_below_C_L^-eta", below, fmt::format("C = {:.4g} from the pilot", C)});

    // Skorokhod construction per L: target = large-torus fields, approximants = small-torus fields
    nlohmann::json manifest = nlohmann::json::array();
    const std::vector<Observable> obs = {obs_re_origin(), obs_abs_origin()};
    double min_ks = 1.0, worst_close = 0.0;
    bool close_ok = true;
    std::size_t good_pairs = 0;
    for (std::size_t l = 0; l < Ls.size(); ++l) {
        SkorokhodInputs il = in;
        il.L = Ls[l];
        // eps_L = exp(-c kappa L^beta / 16) pinned just below 1/n, the finest level the ensemble resolves,
        // so a cell holding a single target member counts as good
        const double n = static_cast<double>(pairs);
        il.rate = 16.0 * std::log(n) / (il.kappa * std::pow(il.L, il.beta)) * (1.0 + 1e-9);
        SkorokhodParams prm = derive_params(il, main.big);
        Rng rng(c.seed(), 3, l);
        CouplingResult cr = build_coupling(main.big, main.small[l], prm, rng);
        std::map<std::string, std::size_t> branches;
        std::vector<TorusField> drawn;
        double close = 0;
        for (const auto& pr : cr.pairs) {
            ++branches[branch_name(pr.branch)];
            drawn.push_back(main.small[l][pr.approx]);
            if (pr.branch == Branch::GoodCell) {
                ++good_pairs;
                double d = grid_distance(main.big[pr.target], main.small[l][pr.approx], prm);
                close = std::max(close, d / prm.tau);
                if (d > 2.0 * prm.tau) close_ok = false;
            }
        }
        worst_close = std::max(worst_close, close);
        nlohmann::json ks = nlohmann::json::object();
        for (const auto& o : obs) {
            auto a = evaluate_observable(o, drawn);
            auto b = evaluate_observable(o, main.small[l]);
            auto k = stats::ks_two_sample(a, b);
            ks[o.name] = k.p_value;
            min_ks = std::min(min_ks, k.p_value);
        }
        manifest.push_back({{"L", Ls[l]},
                            {"R", prm.R},
                            {"K", prm.K},
                            {"delta", prm.delta},
                            {"eps", prm.eps},
                            {"eps_tilde", prm.eps_tilde},
                            {"rate", il.rate},
                            {"M", prm.M},
                            {"J", prm.J},
                            {"tau", prm.tau},
                            {"good_cells", cr.good_cells},
                            {"fallbacks", cr.fallbacks},
                            {"clip_mass", cr.clip_mass},
                            {"branches", branches},
                            {"max_good_distance_over_tau", close},
                            {"ks_p_values", ks}});
    }
    r.json_files["coupling_manifest.json"] = manifest.dump(2);
    r.summary["min_marginal_ks_p"] = min_ks;
    r.summary["good_branch_pairs"] = static_cast<double>(good_pairs);
    r.summary["max_good_distance_over_tau"] = worst_close;
    constexpr double kAlpha = 0.01;
    r.verdicts.push_back({"skorokhod_marginals_ks", min_ks > kAlpha, fmt::format("min p = {:.4g}", min_ks)});
    r.verdicts.push_back({"good_cell_closeness", close_ok && good_pairs > 0,
                          fmt::format("{} good-branch pairs, max distance {:.4g} tau", good_pairs, worst_close)});
    return r;
}

ExperimentResult run_wasserstein(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "wasserstein";
    CoupledSetup s = coupling_setup(c, 64.0);
    auto Ls = c.get_doubles("coupled", "L", {8, 16, 32});
    std::sort(Ls.begin(), Ls.end());
    require(Ls.size() >= 3, "wasserstein: need at least three values of L");
    for (double L : Ls) require(L < s.L[0], "wasserstein: every L must be smaller than K");
    s.L.insert(s.L.end(), Ls.begin(), Ls.end());
    const auto m = static_cast<std::size_t>(c.get_int("coupled", "pairs", 256));
    require(m >= 2, "wasserstein: need at least two pairs");
    const double theta = c.get_double("wasserstein", "theta", 0.5);
    const double record_dt = c.get_double("coupled", "record_dt", 0.25);
    r.rng_streams.push_back(fmt::format("pair i: stream (seed, 1, i); K={} L={} modes_per_unit={} dt={} burn_in={}", s.L[0],
                                        fmt::join(Ls, "/"), s.modes_per_unit, s.dt, s.burn_in));
    Batch b = draw_batch(s, m, c.seed(), 1, theta, record_dt, workers(c));
    r.tables.push_back(ce_table(b, Ls));

    CsvTable t{"wasserstein.csv", {"L", "W1", "stderr", "exact"}, {}};
    std::vector<double> logL, logW, se;
    bool exact = true;
    for (std::size_t l = 0; l < Ls.size(); ++l) {
        W1Result w = wasserstein_1(b.big, b.small[l], theta);
        // spread of the coupled costs gives the sampling error of the estimate
        std::vector<double> cost(m);
        for (std::size_t i = 0; i < m; ++i) cost[i] = ce_theta_distance(b.big[i], b.small[l][i], theta);
        const double e = stats::standard_error(cost);
        exact = exact && w.exact;
        t.add({csv_number(Ls[l]), csv_number(w.value), csv_number(e), w.exact ? "1" : "0"});
        r.summary[fmt::format("W1_L{}", Ls[l])] = w.value;
        logL.push_back(std::log(Ls[l]));
        logW.push_back(std::log(w.value));
        se.push_back(e / w.value);  // delta method on the log scale
    }
    r.tables.push_back(std::move(t));

    // known-variance weighted least squares for the log-slope
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logL.size(); ++i) {
        double w = 1.0 / (se[i] * se[i]);
        sw += w;
        sx += w * logL[i];
        sy += w * logW[i];
        sxx += w * logL[i] * logL[i];
        sxy += w * logL[i] * logW[i];
    }
    const double den = sw * sxx - sx * sx;
    const double slope = (sw * sxy - sx * sy) / den;
    const double slope_se = std::sqrt(sw / den);
    constexpr double kZ95 = 1.959963984540054;
    r.summary["log_slope"] = slope;
    r.summary["log_slope_se"] = slope_se;
    bool decreasing = true;
    for (std::size_t i = 1; i < logW.size(); ++i) decreasing = decreasing && logW[i] < logW[i - 1];
    std::vector<double> W;
    for (double x : logW) W.push_back(std::exp(x));
    r.verdicts.push_back({"w1_strictly_decreasing", decreasing, fmt::format("W1 = {:.4g}", fmt::join(W, ", "))});
    r.verdicts.push_back({"negative_log_slope_95", slope + kZ95 * slope_se < 0,
                          fmt::format("slope {:.4f} +- {:.4f} (95%)", slope, kZ95 * slope_se)});
    r.verdicts.push_back({"exact_assignment", exact, exact ? "Hungarian" : "Sinkhorn fallback used"});
    return r;
}

}  // namespace gibbslab::harness
