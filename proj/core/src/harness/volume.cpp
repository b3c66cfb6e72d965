#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "gibbslab/differences/differences.hpp"
#include "gibbslab/langevin/coupled.hpp"
#include "gibbslab/measures/gff.hpp"
#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/parallel.hpp"
#include "gibbslab/support/stats.hpp"
#include "internal.hpp"

namespace gibbslab::harness {

CoupledDraw coupled_draw(const CoupledSetup& s, Rng& rng, double theta, double record_dt) {
    require(s.L.size() >= 2, "coupled draw: need a large torus and at least one smaller one");
    for (std::size_t i = 1; i < s.L.size(); ++i) require(s.L[i] <= s.L[0], "coupled draw: L[0] must be the largest torus");
    auto grid = [&](double L) {
        double m = L * s.modes_per_unit;
        auto M = static_cast<std::size_t>(std::llround(m));
        require(std::abs(m - static_cast<double>(M)) < 1e-9 && M % 2 == 0,
                "coupled draw: L * modes_per_unit must be an even integer");
        return make_grid(L, M);
    };
    LangevinConfig big{GibbsSpec{grid(s.L[0]), s.p}, s.dt, 0.0, s.taming};
    std::vector<LangevinConfig> small;
    for (std::size_t i = 1; i < s.L.size(); ++i) small.push_back({GibbsSpec{grid(s.L[i]), s.p}, s.dt, 0.0, s.taming});
    CoupledFlows flows(big, small);
    flows.initialise(sample_gff(big.spec.grid, rng));
    CoupledDraw d;
    if (record_dt > 0) {
        d.ce.resize(small.size());
        auto record = [&](double t) {
            d.t.push_back(t);
            for (std::size_t i = 0; i < small.size(); ++i) d.ce[i].push_back(flows.pair(i).psi_distance(theta));
        };
        auto n = static_cast<std::size_t>(std::llround(s.burn_in / record_dt));
        record(0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            flows.advance(record_dt, rng);
            record(static_cast<double>(k) * record_dt);
        }
    } else {
        flows.advance(s.burn_in, rng);
    }
    d.fields.push_back(flows.big().psi);
    for (std::size_t i = 0; i < small.size(); ++i) d.fields.push_back(flows.small(i).psi);
    return d;
}

void evolve_nls(std::vector<TorusField>& u, const NlsConfig& cfg, double T, double slice_dt,
                const std::function<void(std::size_t, double)>& on_slice) {
    require(T > 0 && slice_dt > 0, "evolve_nls: T and slice spacing must be positive");
    const auto n_slices = static_cast<std::size_t>(std::llround(T / slice_dt));
    require(std::abs(static_cast<double>(n_slices) * slice_dt - T) < 1e-9 * T, "evolve_nls: T must be a multiple of the slice spacing");
    std::vector<NlsSolver> solvers;
    for (const auto& f : u) solvers.emplace_back(f.grid(), cfg);
    on_slice(0, 0.0);
    for (std::size_t k = 1; k <= n_slices; ++k) {
        for (std::size_t i = 0; i < u.size(); ++i) solvers[i].advance(u[i], slice_dt);
        on_slice(k, static_cast<double>(k) * slice_dt);
    }
}

namespace {

struct PairSetup {
    CoupledSetup coupled;
    NlsConfig nls;
    double T = 0.5;
    double trace_dt = 0.01;
    Interval window;
    std::size_t runs = 100;
    std::size_t pilot_runs = 100;
};

PairSetup pair_setup(const ExperimentConfig& c, double T_default, std::size_t pilot_default) {
    PairSetup s;
    const auto L = c.get_doubles("model", "L", {20, 10});
    require(L.size() == 2 && L[0] > L[1], "model.L must list the large then the small circumference");
    s.coupled.L = L;
    s.coupled.modes_per_unit = c.get_double("model", "modes_per_unit", 64.0);
    s.coupled.dt = c.get_double("coupled", "dt", 1e-3);
    s.coupled.burn_in = c.get_double("coupled", "burn_in", 3.0);
    s.nls.dt = c.get_double("coupled", "nls_dt", 1e-3);
    s.trace_dt = c.get_double("coupled", "trace_dt", 0.01);
    const double half = c.get_double("coupled", "window", 0.9 * std::numbers::pi * L[1]);
    s.window = {-half, half};
    auto runs = c.get_int("coupled", "runs", 100);
    auto pilot = c.get_int("coupled", "pilot_runs", static_cast<std::int64_t>(pilot_default));
    require(runs >= 1 && pilot >= 1, "coupled.runs and coupled.pilot_runs must be >= 1");
    s.runs = static_cast<std::size_t>(runs);
    s.pilot_runs = static_cast<std::size_t>(pilot);
    s.T = T_default;
    return s;
}

PairSetup with_p(PairSetup s, double p) {
    s.coupled.p = p;
    s.coupled.taming = p >= 5;
    s.nls.p = p;
    validate(s.nls);
    return s;
}

// Everything measured along one coupled NLS pair.
struct PairRun {
    std::vector<double> t;
    std::vector<std::vector<double>> mass;  // mass[r][slice]
    std::vector<double> witness;            // max(sup, high) good-event witness per slice
    double factorization = 0.0;
    std::size_t truncation_flags = 0;
};

PairRun run_pair(const PairSetup& s, const std::vector<double>& R, double delta, Rng& rng) {
    CoupledDraw d = coupled_draw(s.coupled, rng);
    PairRun out;
    out.mass.resize(R.size());
    const double p = s.coupled.p;
    MassOptions mo;
    mo.strict_truncation = false;
    evolve_nls(d.fields, s.nls, s.T, s.trace_dt, [&](std::size_t, double t) {
        WindowPair pair = make_window_pair(d.fields[0], d.fields[1], s.window);
        out.t.push_back(t);
        for (std::size_t r = 0; r < R.size(); ++r) {
            MassValue m = mass_MR(pair, R[r], mo);
            if (!m.truncation_ok) ++out.truncation_flags;
            out.mass[r].push_back(m.value);
        }
        out.factorization = std::max(out.factorization, factorization_residual(pair, q_coefficients(pair, p), p));
        GoodEventParams gp{1.0, delta, s.T, R.back()};
        GoodEventResult g = good_event_check(std::span<const WindowPair>(&pair, 1), gp, p);
        out.witness.push_back(std::max(g.sup_witness, g.high_witness));
    });
    return out;
}

std::vector<PairRun> run_pairs(const PairSetup& s, const std::vector<double>& R, double delta, std::uint64_t seed,
                               std::uint64_t stream, std::size_t n, unsigned nworkers) {
    std::vector<std::optional<PairRun>> slots(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            Rng rng(seed, stream, i);
            slots[i].emplace(run_pair(s, R, delta, rng));
        },
        nworkers);
    std::vector<PairRun> out;
    for (auto& x : slots) out.push_back(std::move(*x));
    return out;
}

double max_witness(const PairRun& r) { return *std::max_element(r.witness.begin(), r.witness.end()); }

std::string pair_description(const PairSetup& s) {
    return fmt::format("L={}/{} modes_per_unit={} langevin dt={} burn_in={} nls dt={} T={} trace_dt={} window=[{}, {}]",
                       s.coupled.L[0], s.coupled.L[1], s.coupled.modes_per_unit, s.coupled.dt, s.coupled.burn_in,
                       s.nls.dt, s.T, s.trace_dt, s.window.a, s.window.b);
}

}  // namespace

ExperimentResult run_gronwall(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "gronwall";
    const auto ps = c.get_doubles("model", "p", {3, 5});
    const double T = c.get_double("gronwall", "T", 0.5);
    const auto R = c.get_doubles("gronwall", "R", {16, 32});
    const double delta = c.get_double("gronwall", "delta", 0.05);
    const double min_fraction = c.get_double("gronwall", "min_fraction", 0.99);
    for (double x : R) require(T <= x, "gronwall: requires T <= R");
    const PairSetup base = pair_setup(c, T, 200);
    const unsigned nw = workers(c);

    // pilot batch fixes A0 and A2; the main batch is then checked against them
    double A0 = 0, A2 = 0;
    std::vector<std::vector<PairRun>> main(ps.size());
    for (std::size_t k = 0; k < ps.size(); ++k) {
        PairSetup s = with_p(base, ps[k]);
        r.rng_streams.push_back(fmt::format("p={} pilot: stream (seed, {}, run); main: stream (seed, {}, run); {}", ps[k],
                                            2 * k + 1, 2 * k + 2, pair_description(s)));
        auto pilot = run_pairs(s, R, delta, c.seed(), 2 * k + 1, s.pilot_runs, nw);
        for (const auto& pr : pilot) {
            A0 = std::max(A0, max_witness(pr));
            for (std::size_t j = 0; j < R.size(); ++j) {
                MassTrace tr{R[j], pr.t, pr.mass[j], {}};
                A2 = std::max(A2, minimal_A2(tr, EnvelopeParams{1.0, 0.0, T, R[j], delta, ps[k]}));
            }
        }
        main[k] = run_pairs(s, R, delta, c.seed(), 2 * k + 2, s.runs, nw);
    }

    std::vector<CsvTable> traces;
    for (double x : R) traces.push_back({fmt::format("mass_trace_R{}.csv", x), {"p", "run", "t", "M_R", "envelope", "good_event_flag"}, {}});
    std::size_t total = 0, good_runs = 0, held = 0, trunc = 0;
    double fact = 0, worst_ratio = 0;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        for (std::size_t i = 0; i < main[k].size(); ++i) {
            const PairRun& pr = main[k][i];
            ++total;
            fact = std::max(fact, pr.factorization);
            trunc += pr.truncation_flags;
            const bool good = max_witness(pr) <= A0;
            bool ok = true;
            for (std::size_t j = 0; j < R.size(); ++j) {
                MassTrace tr{R[j], pr.t, pr.mass[j], {}};
                Envelope env = gronwall_envelope(tr, EnvelopeParams{A2, 0.0, T, R[j], delta, ps[k]});
                ok = ok && env.holds;
                worst_ratio = std::max(worst_ratio, env.max_ratio);
                for (std::size_t s = 0; s < pr.t.size(); ++s)
                    traces[j].add({csv_number(ps[k]), std::to_string(i), csv_number(pr.t[s]), csv_number(pr.mass[j][s]),
                                   csv_number(env.values[s]), pr.witness[s] <= A0 ? "1" : "0"});
            }
            if (good) {
                ++good_runs;
                if (ok) ++held;
            }
        }
    }
    for (auto& t : traces) r.tables.push_back(std::move(t));
    const double frac = good_runs ? static_cast<double>(held) / static_cast<double>(good_runs) : 0.0;
    r.summary["A0"] = A0;
    r.summary["A2"] = A2;
    r.summary["runs"] = static_cast<double>(total);
    r.summary["good_event_runs"] = static_cast<double>(good_runs);
    r.summary["below_envelope"] = static_cast<double>(held);
    r.summary["fraction_below"] = frac;
    r.summary["max_trace_over_envelope"] = worst_ratio;
    r.summary["max_factorization_residual"] = fact;
    r.summary["truncation_flags"] = static_cast<double>(trunc);
    nlohmann::json cal = {{"A0", A0}, {"A2", A2}, {"delta", delta}, {"T", T}, {"R", R}, {"p", ps},
                          {"pilot_runs_per_p", base.pilot_runs}, {"runs_per_p", base.runs}};
    r.json_files["calibration.json"] = cal.dump(2);
    if (trunc) r.warnings.push_back(fmt::format("{} mass evaluations exceeded the truncation tolerance (kept, not fatal)", trunc));
    if (good_runs < total) r.warnings.push_back(fmt::format("{} of {} runs left the good event and were excluded", total - good_runs, total));
    r.verdicts.push_back({"envelope_fraction", frac >= min_fraction,
                          fmt::format("{}/{} good-event runs below the envelope ({:.4f}), limit {}", held, good_runs, frac, min_fraction)});
    constexpr double kFactorizationTol = 1e-10;
    r.verdicts.push_back({"factorization_residual", fact < kFactorizationTol, fmt::format("max residual {:.3g}", fact)});
    return r;
}

ExperimentResult run_iterated(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "iterated";
    const double p = c.get_double("model", "p", 3.0);
    const double T = c.get_double("iterated", "T", 0.5);
    const double R = c.get_double("iterated", "R", 10.0);
    const auto J = static_cast<int>(c.get_int("iterated", "J", 2));
    const double tau0 = c.get_double("iterated", "tau0", 0.25);
    const double min_fraction = c.get_double("iterated", "min_fraction", 0.95);
    IterationSchedule sched = iterated_schedule(R, T, J, 0.0, 1.0, tau0);
    const PairSetup s = with_p(pair_setup(c, T, 100), p);
    const unsigned nw = workers(c);
    constexpr double kDelta = 0.05;
    r.rng_streams.push_back(fmt::format("pilot: stream (seed, 1, run); main: stream (seed, 2, run); {}", pair_description(s)));

    // per-leg sup of M_{R_j}
    auto legs = [&](const PairRun& pr) {
        std::vector<double> m(static_cast<std::size_t>(J) + 1, 0.0);
        for (int j = 0; j <= J; ++j) {
            Interval I = sched.leg(j);
            for (std::size_t k = 0; k < pr.t.size(); ++k)
                if (pr.t[k] >= I.a - 1e-9 && pr.t[k] <= I.b + 1e-9) m[j] = std::max(m[j], pr.mass[j][k]);
        }
        return m;
    };
    auto pilot = run_pairs(s, sched.radii, kDelta, c.seed(), 1, s.pilot_runs, nw);
    double A3 = 0;
    for (const auto& pr : pilot) {
        auto m = legs(pr);
        for (int j = 0; j <= J; ++j) A3 = std::max(A3, std::pow(m[j] * std::sqrt(sched.radii[j]), 1.0 / (j + 1)));
    }
    sched = iterated_schedule(R, T, J, 0.0, A3, tau0);
    auto main = run_pairs(s, sched.radii, kDelta, c.seed(), 2, s.runs, nw);
    CsvTable t{"legs.csv", {"run", "j", "R_j", "t_start", "t_end", "M_sup", "bound", "holds"}, {}};
    std::size_t held = 0;
    for (std::size_t i = 0; i < main.size(); ++i) {
        auto m = legs(main[i]);
        bool ok = true;
        for (int j = 0; j <= J; ++j) {
            Interval I = sched.leg(j);
            bool h = m[j] <= sched.leg_bounds[j];
            ok = ok && h;
            t.add({std::to_string(i), std::to_string(j), csv_number(sched.radii[j]), csv_number(I.a), csv_number(I.b),
                   csv_number(m[j]), csv_number(sched.leg_bounds[j]), h ? "1" : "0"});
        }
        if (ok) ++held;
    }
    r.tables.push_back(std::move(t));
    nlohmann::json js = {{"J", sched.J}, {"T", sched.T}, {"tau", sched.tau}, {"tau0", sched.tau0}, {"A3", sched.A3},
                         {"radii", sched.radii}, {"leg_bounds", sched.leg_bounds}, {"final_bound", sched.final_bound}};
    nlohmann::json legs_json = nlohmann::json::array();
    for (int j = 0; j <= J; ++j) legs_json.push_back({sched.leg(j).a, sched.leg(j).b});
    js["legs"] = legs_json;
    r.json_files["schedule.json"] = js.dump(2);
    const double frac = static_cast<double>(held) / static_cast<double>(main.size());
    r.summary["A3"] = A3;
    r.summary["fraction_within"] = frac;
    r.verdicts.push_back({"leg_bounds", frac >= min_fraction,
                          fmt::format("{}/{} runs within every leg bound ({:.4f}), limit {}", held, main.size(), frac, min_fraction)});
    return r;
}

ExperimentResult run_convergence(const ExperimentConfig& c) {
    ExperimentResult r;
    r.id = "convergence";
    CoupledSetup cs;
    cs.p = c.get_double("model", "p", 3.0);
    cs.taming = cs.p >= 5;
    cs.modes_per_unit = c.get_double("model", "modes_per_unit", 32.0);
    auto Ls = c.get_doubles("coupled", "L", {8, 16, 32});
    require(Ls.size() >= 2, "convergence: need at least two circumferences");
    std::sort(Ls.begin(), Ls.end(), std::greater<>());
    for (std::size_t i = 1; i < Ls.size(); ++i)
        require(std::abs(Ls[i - 1] - 2 * Ls[i]) < 1e-9, "convergence: circumferences must be successive halvings");
    cs.L = Ls;
    cs.dt = c.get_double("coupled", "dt", 1e-3);
    cs.burn_in = c.get_double("coupled", "burn_in", 3.0);
    auto runs = static_cast<std::size_t>(c.get_int("coupled", "runs", 100));
    require(runs >= 1, "coupled.runs must be >= 1");
    NlsConfig nls{cs.p, c.get_double("coupled", "nls_dt", 1e-3), 1, 1.0};
    validate(nls);
    const double T = c.get_double("convergence", "T", 0.5);
    const double alpha = c.get_double("convergence", "alpha", 0.2);
    const double half = c.get_double("convergence", "window", 2.0);
    const double snap = c.get_double("convergence", "snapshot_dt", 0.01);
    require(alpha > 0 && alpha < 1, "convergence.alpha must lie in (0, 1)");
    const Interval window{-half, half};
    r.rng_streams.push_back(fmt::format("run i: stream (seed, 1, i); L={} modes_per_unit={} langevin dt={} burn_in={}",
                                        fmt::join(Ls, "/"), cs.modes_per_unit, cs.dt, cs.burn_in));

    // norms[i][k]: sup_t |u_{L_k} - u_{L_k / 2}|_{C^alpha(window)}, k over all but the smallest torus
    const std::size_t nd = Ls.size() - 1;
    std::vector<std::vector<double>> norms(runs, std::vector<double>(nd, 0.0));
    parallel_for(
        runs,
        [&](std::size_t i) {
            Rng rng(c.seed(), 1, i);
            CoupledDraw d = coupled_draw(cs, rng);
            evolve_nls(d.fields, nls, T, snap, [&](std::size_t, double) {
                for (std::size_t k = 0; k < nd; ++k) {
                    WindowPair pair = make_window_pair(d.fields[k], d.fields[k + 1], window);
                    Restriction rw{pair.x, pair.difference()};
                    double sup = 0;
                    for (cplx v : rw.v) sup = std::max(sup, std::abs(v));
                    norms[i][k] = std::max(norms[i][k], sup + holder_seminorm_on_samples(rw, alpha));
                }
            });
        },
        workers(c));

    CsvTable per_run{"convergence_runs.csv", {"run", "L", "norm"}, {}};
    CsvTable summary{"convergence.csv", {"L", "median", "q25", "q75"}, {}};
    std::vector<double> logL, logm, med(nd);
    for (std::size_t k = nd; k-- > 0;) {
        std::vector<double> v(runs);
        for (std::size_t i = 0; i < runs; ++i) {
            v[i] = norms[i][k];
            per_run.add({std::to_string(i), csv_number(Ls[k]), csv_number(v[i])});
        }
        med[k] = stats::median(v);
        summary.add({csv_number(Ls[k]), csv_number(med[k]), csv_number(stats::quantile(v, 0.25)), csv_number(stats::quantile(v, 0.75))});
        r.summary[fmt::format("median_L{}", Ls[k])] = med[k];
        logL.push_back(std::log(Ls[k]));
        logm.push_back(std::log(med[k]));
    }
    r.tables.push_back(std::move(summary));
    r.tables.push_back(std::move(per_run));
    if (nd >= 2) r.summary["log_slope"] = stats::linear_fit(logL, logm).slope;
    // med[k] belongs to L_k; k = 0 is the largest torus
    bool decreasing = true;
    std::string detail;
    for (std::size_t k = nd; k-- > 0;) {
        detail += fmt::format("{}L={}: {:.4g}", detail.empty() ? "" : ", ", Ls[k], med[k]);
        if (k + 1 < nd && !(med[k] < med[k + 1])) decreasing = false;
    }
    r.verdicts.push_back({"median_decreasing", decreasing, detail});
    return r;
}

}  // namespace gibbslab::harness
